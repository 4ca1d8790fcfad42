from fractions import Fraction

from hypothesis import strategies as st

PRIMES = (2, 3, 5, 7)
PLACES = ("inf", 2, 3, 5, 7)

ints = st.integers(min_value=-(10**6), max_value=10**6)
dens = st.integers(min_value=1, max_value=10**6)
rationals = st.builds(Fraction, ints, dens)
nonzero = rationals.filter(bool)
small_nonzero = st.builds(
    Fraction, st.integers(-200, 200).filter(bool), st.integers(1, 200)
)
primes = st.sampled_from(PRIMES)
places = st.sampled_from(PLACES)
