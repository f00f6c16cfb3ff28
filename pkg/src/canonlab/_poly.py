"""Dense univariate polynomials over Q as coefficient lists, lowest degree first."""
from fractions import Fraction
from math import comb


def trim(p):
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def degree(p):
    p = trim(p)
    return len(p) - 1  # -1 for the zero polynomial


def mul(p, q):
    if not p or not q:
        return []
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if not a:
            continue
        for j, b in enumerate(q):
            if b:
                out[i + j] += a * b
    return out


def evaluate(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def derivative(p):
    return [i * p[i] for i in range(1, len(p))]


def divmod_poly(a, b):
    a = [Fraction(x) for x in trim(a)]
    b = [Fraction(x) for x in trim(b)]
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        f = a[-1] / lead
        q[shift] = f
        for i, c in enumerate(b):
            a[i + shift] -= f * c
        a = trim(a)
    return q, a


def monic(p):
    p = trim(p)
    if not p:
        return []
    lead = Fraction(p[-1])
    return [Fraction(c) / lead for c in p]


def _content_free(p):
    from math import gcd as igcd

    den = 1
    for c in p:
        c = Fraction(c)
        den = den * c.denominator // igcd(den, c.denominator)
    ints = [int(Fraction(c) * den) for c in p]
    g = 0
    for c in ints:
        g = igcd(g, c)
    if g > 1:
        ints = [c // g for c in ints]
    if ints and ints[-1] < 0:
        ints = [-c for c in ints]
    return ints


def _prem(a, b):
    """Pseudo-remainder of integer polynomials."""
    a = list(a)
    lead = b[-1]
    db = len(b) - 1
    while len(a) - 1 >= db and a:
        f = a[-1]
        shift = len(a) - 1 - db
        a = [lead * x for x in a]
        for i, c in enumerate(b):
            a[i + shift] -= f * c
        a = trim(a)
    return a


def gcd(a, b):
    """Monic gcd over Q via a primitive polynomial remainder sequence."""
    a, b = trim(a), trim(b)
    if not a:
        return monic(b)
    if not b:
        return monic(a)
    a, b = _content_free(a), _content_free(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _prem(a, b)
        a, b = b, (_content_free(r) if r else [])
    return monic(a)


def gcd_many(polys):
    g = []
    for p in polys:
        g = gcd(g, p) if g else monic(p)
        if len(g) == 1:
            break
    return g


def root_multiplicity(p, x):
    """Order of vanishing of ``p`` at the rational point ``x`` (inf for 0)."""
    p = trim(p)
    if not p:
        return float("inf")
    m = 0
    while evaluate(p, x) == 0:
        p, _ = divmod_poly(p, [-x, 1])
        m += 1
    return m


def taylor(p, x, order):
    """First ``order`` Taylor coefficients of ``p`` at ``x``."""
    out = []
    for i in range(order):
        out.append(sum(c * comb(d, i) * x ** (d - i) for d, c in enumerate(p) if d >= i and c))
    return out


def binomial_series(a, n, order):
    """Coefficients of ``(a + x)**n`` up to ``x**(order-1)``, any integer n, a != 0."""
    a = Fraction(a)
    out = []
    coef = Fraction(1)
    for j in range(order):
        # generalized binomial C(n, j), built incrementally
        out.append(coef * a ** (n - j))
        coef = coef * (n - j) / (j + 1)
    return out


def series_mul(p, q, order):
    out = [Fraction(0)] * order
    for i, a in enumerate(p[:order]):
        if not a:
            continue
        for j, b in enumerate(q[:order - i]):
            if b:
                out[i + j] += a * b
    return out
