"""
Free-group words and their Magnus expansions
============================================

Words in a free group embed into a power series ring with noncommuting
variables by sending each generator to 1 + X_i. Everything here is exact
integer arithmetic on truncated series.
"""

from weldmag.magnus import TruncationPolicy, expand, format_series, series_mul
from weldmag.words import commutator, generator, invert, multiply, parse_word

# a word is parsed from tokens: lowercase = generator, uppercase = inverse
w = parse_word("a1 A2 A1 a2", 2)
print("word:", w)

# the same word built structurally; the commutator convention here is
# [x, y] = x * inv(y) * inv(x) * y
a = generator(2, 1)
b = generator(2, 2)
print("equals commutator(a1, a2):", commutator(a, b) == w)

# expand up to total degree 3
pol = TruncationPolicy.total_degree(2, 3)
s = expand(w, pol)
print("expansion of [a1,a2]:")
print(format_series(s))

# in lowest degree a commutator looks like the ring bracket X2 X1 - X1 X2
print("coefficient of X2 X1:", s.coefficient((2, 1)))
print("coefficient of X1 X2:", s.coefficient((1, 2)))

# a word times its inverse expands to the constant series 1
t = expand(invert(w), pol)
print("w * inv(w) expands to 1:", series_mul(s, t).is_one)

# only the empty word expands to 1, which is what makes the expansion
# usable as an invariant: distinct reduced words stay distinct
u = multiply(w, a)
print("[a1,a2] * a1 expands to 1:", expand(u, pol).is_one)
