// Fixed canvas coordinates for the vertiport network. A deterministic layout
// keeps the SVG output stable for snapshot tests and easy on the eye: the
// seven vertiports sit on a ring, slightly nudged so the busy corridors do
// not overlap.

export interface Point {
  x: number;
  y: number;
}

export const CANVAS = { width: 900, height: 560 };

const RING: Record<number, Point> = {
  1: { x: 120, y: 280 },
  2: { x: 430, y: 170 },
  3: { x: 760, y: 280 },
  4: { x: 240, y: 80 },
  5: { x: 240, y: 480 },
  6: { x: 640, y: 480 },
  7: { x: 600, y: 60 },
};

export function vertiportPosition(vp: number): Point {
  const fixed = RING[vp];
  if (fixed) return fixed;
  // fallback for networks larger than the bundled one: spiral outward
  const angle = (vp * 2 * Math.PI) / 9;
  return {
    x: Math.round(450 + 200 * Math.cos(angle)),
    y: Math.round(280 + 200 * Math.sin(angle)),
  };
}

/** Position of waypoint `wp` of `total` along the corridor from u to v. */
export function waypointPosition(u: number, v: number, wp: number, total: number): Point {
  const a = vertiportPosition(u);
  const b = vertiportPosition(v);
  const t = total <= 1 ? 0.5 : wp / (total + 1);
  return {
    x: Math.round(a.x + (b.x - a.x) * t),
    y: Math.round(a.y + (b.y - a.y) * t),
  };
}
