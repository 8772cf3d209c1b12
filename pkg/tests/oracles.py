"""Definition-level reference computations, kept free of numpy."""
import math


def two_pass_std(xs):
    n = len(xs)
    mean = sum(xs) / n
    return math.sqrt(sum((x - mean) ** 2 for x in xs) / n)


def successive_rms(xs):
    diffs = [b - a for a, b in zip(xs, xs[1:])]
    return math.sqrt(sum(d * d for d in diffs) / len(diffs))


def pearson_definition(xs, ys):
    n = len(xs)
    mx, my = sum(xs) / n, sum(ys) / n
    cov = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    vx = sum((x - mx) ** 2 for x in xs)
    vy = sum((y - my) ** 2 for y in ys)
    return cov / math.sqrt(vx * vy)


def average_ranks(xs):
    order = sorted(range(len(xs)), key=lambda i: xs[i])
    ranks = [0.0] * len(xs)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and xs[order[j + 1]] == xs[order[i]]:
            j += 1
        for k in range(i, j + 1):
            ranks[order[k]] = (i + j) / 2 + 1
        i = j + 1
    return ranks


def malik_reference(values, tol=0.2):
    out = [values[0]]
    for v in values[1:]:
        if abs(v - out[-1]) <= tol * out[-1]:
            out.append(v)
    return out
