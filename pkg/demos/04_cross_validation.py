# coding: utf-8

# # Signatures against the oracle
#
# decide_iso answers from the gap signatures alone: equal range sizes, and
# signatures equal up to reversal.  cross_validate runs the oracle on the
# same pairs and reports any disagreement.

# In[1]:

import time

from ordsemi.chains import ChainPair
from ordsemi.decision import (construct_iso_x2, cross_validate, decide_iso,
                              instance_family, witness_iso)
from ordsemi.semigroup import build_cayley, verify_iso

d = decide_iso(ChainPair.of(3, [1, 2]), ChainPair.of(3, [0, 1]))
print(d.to_json())

# In[2]:

family = instance_family(5)
t0 = time.perf_counter()
report = cross_validate(family)
print(report.summary(), f"in {time.perf_counter() - t0:.1f} s")

# Every positive verdict carries a witness that can be checked on its own.

# In[3]:

a, b = ChainPair.of(6, [0, 2, 5]), ChainPair.of(6, [0, 3, 5])
d = decide_iso(a, b)
A, B = build_cayley(a), build_cayley(b)
print(d.rule, d.witness, verify_iso(A, B, witness_iso(d, A, B)))

# For two-point ranges any bijection between matching classes will do.

# In[4]:

S = build_cayley(ChainPair.of(6, [1, 4]))
for f3 in [(0, 1, 2), (2, 0, 1), (1, 2, 0)]:
    print(f3, verify_iso(S, S, construct_iso_x2(S, S, f3=f3)))
