# coding: utf-8

# # Searching for isomorphisms and reading off the chain map
#
# The oracle works on bare Cayley tables.  Whatever bijection it finds, the
# constant maps must go to constant maps, and that induces a bijection
# between the two ranges.  For these semigroups it is always monotone or
# antitone.

# In[1]:

from ordsemi.chains import ChainPair
from ordsemi.semigroup import (automorphisms, build_cayley, check_preservation,
                               extend_theta_hat, extract_theta, find_iso)

a, b = ChainPair.of(3, [1, 2]), ChainPair.of(3, [0, 1])
A, B = build_cayley(a), build_cayley(b)
m = find_iso(A, B)
print("witness:", m.mapping)
theta = extract_theta(A, B, m)
print("induced range map:", theta.as_dict(), theta.orientation)

# The gap triples (1, 0, 0) and (0, 0, 1) are reverses of each other, so the
# only isomorphism reverses the order of the ranges.

# In[2]:

rep = check_preservation(A, B, m)
print("structure checks:", rep.checked, "clean:", rep.clean)
ext = extend_theta_hat(A, B, m)
print("blocks matched after reading the target backwards:", ext.reversed_codomain)

# # A palindromic signature
#
# The nine-point chain with the even positions as range has a symmetric gap
# signature.  Its 715-element semigroup has exactly two automorphisms.

# In[3]:

T = build_cayley(ChainPair.of(9, [0, 2, 4, 6, 8]))
auts = automorphisms(T)
print(len(auts), "automorphisms")
for aut in auts:
    print(extract_theta(T, T, aut).orientation)

# In[4]:

c = build_cayley(ChainPair.of(3, [0, 2]))
print("n=3 {0,1} vs n=3 {0,2}:", find_iso(B, c))
