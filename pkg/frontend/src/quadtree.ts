/** Retained quadtree for dot hover hit-testing (point data, desk scale). */

export interface QuadItem<T> {
  x: number;
  y: number;
  data: T;
}

interface Node<T> {
  x0: number;
  y0: number;
  x1: number;
  y1: number;
  items: QuadItem<T>[];
  children: Node<T>[] | null;
}

const NODE_CAPACITY = 16;
const MAX_DEPTH = 12;

function contains<T>(node: Node<T>, x: number, y: number): boolean {
  return x >= node.x0 && x <= node.x1 && y >= node.y0 && y <= node.y1;
}

function intersectsCircle<T>(
  node: Node<T>,
  cx: number,
  cy: number,
  r: number,
): boolean {
  const dx = cx - Math.max(node.x0, Math.min(cx, node.x1));
  const dy = cy - Math.max(node.y0, Math.min(cy, node.y1));
  return dx * dx + dy * dy <= r * r;
}

export class Quadtree<T> {
  private readonly root: Node<T>;

  constructor(x0: number, y0: number, x1: number, y1: number) {
    this.root = { x0, y0, x1, y1, items: [], children: null };
  }

  insert(x: number, y: number, data: T): void {
    if (!contains(this.root, x, y)) {
      // Out-of-bounds points are kept at the root so queries still find them.
      this.root.items.push({ x, y, data });
      return;
    }
    this.insertInto(this.root, { x, y, data }, 0);
  }

  private insertInto(node: Node<T>, item: QuadItem<T>, depth: number): void {
    if (node.children === null) {
      node.items.push(item);
      if (node.items.length > NODE_CAPACITY && depth < MAX_DEPTH) {
        this.subdivide(node);
        const items = node.items;
        node.items = [];
        for (const existing of items) this.insertInto(node, existing, depth);
      }
      return;
    }
    for (const child of node.children) {
      if (contains(child, item.x, item.y)) {
        this.insertInto(child, item, depth + 1);
        return;
      }
    }
    node.items.push(item); // on a boundary: keep at this level
  }

  private subdivide(node: Node<T>): void {
    const mx = (node.x0 + node.x1) / 2;
    const my = (node.y0 + node.y1) / 2;
    node.children = [
      { x0: node.x0, y0: node.y0, x1: mx, y1: my, items: [], children: null },
      { x0: mx, y0: node.y0, x1: node.x1, y1: my, items: [], children: null },
      { x0: node.x0, y0: my, x1: mx, y1: node.y1, items: [], children: null },
      { x0: mx, y0: my, x1: node.x1, y1: node.y1, items: [], children: null },
    ];
  }

  /** All items within `radius` of (x, y). */
  queryCircle(x: number, y: number, radius: number): QuadItem<T>[] {
    const out: QuadItem<T>[] = [];
    const stack: Node<T>[] = [this.root];
    while (stack.length > 0) {
      const node = stack.pop()!;
      if (node !== this.root && !intersectsCircle(node, x, y, radius)) continue;
      for (const item of node.items) {
        const dx = item.x - x;
        const dy = item.y - y;
        if (dx * dx + dy * dy <= radius * radius) out.push(item);
      }
      if (node.children) stack.push(...node.children);
    }
    return out;
  }

  /** Closest item within `radius` of (x, y), or null. */
  nearest(x: number, y: number, radius: number): QuadItem<T> | null {
    let best: QuadItem<T> | null = null;
    let bestDsq = radius * radius;
    for (const item of this.queryCircle(x, y, radius)) {
      const dx = item.x - x;
      const dy = item.y - y;
      const dsq = dx * dx + dy * dy;
      if (dsq <= bestDsq) {
        bestDsq = dsq;
        best = item;
      }
    }
    return best;
  }
}
