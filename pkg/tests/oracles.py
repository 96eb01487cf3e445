"""Brute-force reference implementations the production code is checked
against. Deliberately naive and independent of the library's algorithms:
BFS labeling instead of union-find, per-pixel loops instead of vectorized
counting."""

from collections import deque


def bfs_label_8(values) -> list[set[tuple[int, int]]]:
    """8-connected components by breadth-first search, in scan order."""
    height = len(values)
    width = len(values[0]) if height else 0
    seen = [[False] * width for _ in range(height)]
    components = []
    for y in range(height):
        for x in range(width):
            if not values[y][x] or seen[y][x]:
                continue
            comp = set()
            queue = deque([(x, y)])
            seen[y][x] = True
            while queue:
                cx, cy = queue.popleft()
                comp.add((cx, cy))
                for nx in (cx - 1, cx, cx + 1):
                    for ny in (cy - 1, cy, cy + 1):
                        if 0 <= nx < width and 0 <= ny < height and values[ny][nx] and not seen[ny][nx]:
                            seen[ny][nx] = True
                            queue.append((nx, ny))
            components.append(comp)
    return components


def minmax_box(region) -> tuple[int, int, int, int]:
    xs = sorted(p[0] for p in region)
    ys = sorted(p[1] for p in region)
    return xs[0], ys[0], xs[-1] - xs[0] + 1, ys[-1] - ys[0] + 1


def direct_moments(region) -> tuple[int, int, int]:
    m00 = m10 = m01 = 0
    for x, y in region:
        m00 += 1
        m10 += x
        m01 += y
    return m00, m10, m01


def pixel_confusion(pred_values, gt_values) -> tuple[int, int, int, int]:
    tp = fp = fn = tn = 0
    for prow, grow in zip(pred_values, gt_values):
        for p, g in zip(prow, grow):
            if p and g:
                tp += 1
            elif p and not g:
                fp += 1
            elif not p and g:
                fn += 1
            else:
                tn += 1
    return tp, fp, fn, tn


def threshold_loop(values, t) -> list[list[int]]:
    return [[1 if v > t else 0 for v in row] for row in values]


def flood_fill_loop(values, seed, delta) -> set[tuple[int, int]]:
    """8-connected region growing against the seed intensity, recursive
    frontier style."""
    width, height = len(values[0]), len(values)
    sx, sy = seed
    ref = values[sy][sx]
    region = {seed}
    stack = [seed]
    while stack:
        x, y = stack.pop()
        for nx in (x - 1, x, x + 1):
            for ny in (y - 1, y, y + 1):
                if 0 <= nx < width and 0 <= ny < height and (nx, ny) not in region:
                    if abs(values[ny][nx] - ref) <= delta:
                        region.add((nx, ny))
                        stack.append((nx, ny))
    return region
