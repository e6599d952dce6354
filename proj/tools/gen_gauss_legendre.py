"""Regenerate src/gauss_legendre_table.inc (nodes/weights rounded to nearest binary64)."""
import sys
import mpmath as mp

mp.mp.dps = 60
ORDERS = (8, 16, 32)


def rule(n):
    nodes, weights = [], []
    for i in range(1, n + 1):
        x = mp.cos(mp.pi * (i - mp.mpf(1) / 4) / (n + mp.mpf(1) / 2))
        for _ in range(100):
            p0, p1 = mp.mpf(1), x
            for k in range(2, n + 1):
                p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
            dp = n * (x * p1 - p0) / (x * x - 1)
            dx = p1 / dp
            x -= dx
            if abs(dx) < mp.mpf(10) ** -55:
                break
        p0, p1 = mp.mpf(1), x
        for k in range(2, n + 1):
            p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
        dp = n * (x * p1 - p0) / (x * x - 1)
        nodes.append(x)
        weights.append(2 / ((1 - x * x) * dp * dp))
    return nodes, weights


def main(out):
    lines = ["// generated by tools/gen_gauss_legendre.py; do not edit", ""]
    for n in ORDERS:
        t, w = rule(n)
        lines.append(f"constexpr double kGlNodes{n}[{n}] = {{")
        lines += [f"    {float(x).hex()}," for x in t]
        lines.append("};")
        lines.append(f"constexpr double kGlWeights{n}[{n}] = {{")
        lines += [f"    {float(x).hex()}," for x in w]
        lines.append("};")
        lines.append("")
    with open(out, "w") as f:
        f.write("\n".join(lines))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "src/gauss_legendre_table.inc")
