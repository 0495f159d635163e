// Minimal deterministic force-directed layout: seeded initial positions
// from a label hash, then a fixed number of repulsion/spring iterations.

export interface Point {
  x: number;
  y: number;
}

function hashLabel(label: string): number {
  let h = 2166136261;
  for (let i = 0; i < label.length; i++) {
    h ^= label.charCodeAt(i);
    h = Math.imul(h, 16777619);
  }
  return (h >>> 0) / 4294967295;
}

export function layoutGraph(
  labels: string[],
  edges: [string, string][],
  width = 800,
  height = 600,
  iterations = 120,
): Map<string, Point> {
  const positions = new Map<string, Point>();
  for (const label of labels) {
    const a = hashLabel(label);
    const b = hashLabel(label + "#y");
    positions.set(label, {
      x: width * (0.1 + 0.8 * a),
      y: height * (0.1 + 0.8 * b),
    });
  }
  const k = Math.sqrt((width * height) / Math.max(labels.length, 1));
  for (let step = 0; step < iterations; step++) {
    const forces = new Map<string, Point>(labels.map((l) => [l, { x: 0, y: 0 }]));
    for (let i = 0; i < labels.length; i++) {
      for (let j = i + 1; j < labels.length; j++) {
        const a = positions.get(labels[i])!;
        const b = positions.get(labels[j])!;
        let dx = a.x - b.x;
        let dy = a.y - b.y;
        const dist = Math.max(Math.hypot(dx, dy), 0.01);
        const repulsion = (k * k) / dist / dist;
        dx *= repulsion;
        dy *= repulsion;
        const fa = forces.get(labels[i])!;
        const fb = forces.get(labels[j])!;
        fa.x += dx;
        fa.y += dy;
        fb.x -= dx;
        fb.y -= dy;
      }
    }
    for (const [from, to] of edges) {
      const a = positions.get(from);
      const b = positions.get(to);
      if (!a || !b) continue;
      const dx = b.x - a.x;
      const dy = b.y - a.y;
      const dist = Math.max(Math.hypot(dx, dy), 0.01);
      const attraction = (dist * dist) / k / dist;
      const fa = forces.get(from)!;
      const fb = forces.get(to)!;
      fa.x += dx * attraction * 0.05;
      fa.y += dy * attraction * 0.05;
      fb.x -= dx * attraction * 0.05;
      fb.y -= dy * attraction * 0.05;
    }
    const temperature = 10 * (1 - step / iterations) + 1;
    for (const label of labels) {
      const p = positions.get(label)!;
      const f = forces.get(label)!;
      const magnitude = Math.max(Math.hypot(f.x, f.y), 0.01);
      p.x += (f.x / magnitude) * Math.min(magnitude, temperature);
      p.y += (f.y / magnitude) * Math.min(magnitude, temperature);
      p.x = Math.min(width - 20, Math.max(20, p.x));
      p.y = Math.min(height - 20, Math.max(20, p.y));
    }
  }
  return positions;
}
