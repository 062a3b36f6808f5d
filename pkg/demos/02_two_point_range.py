# coding: utf-8

# # Two-point ranges
#
# With X' = {p, q} every order-preserving map falls into one of five shapes.
# Two of them are the constants.  The rest either fix p and q, or squash X'
# onto one point while the map as a whole still uses both values.  The sizes of these
# classes depend only on the gap triple (M1, M2, M3), the number of points
# below p, between p and q, and above q.

# In[1]:

from ordsemi.chains import ChainPair, gap_signature
from ordsemi.structures import (LambdaShape, classify_lambda, k_classes,
                                lambda_class_sizes, lambda_mult_table_check)
from ordsemi.transformations import enumerate_top

pair = ChainPair.of(6, [1, 4])
print(pair, "gaps:", gap_signature(pair).gaps)
for alpha in enumerate_top(pair):
    print(classify_lambda(alpha), alpha.image)

# In[2]:

print("class sizes:", lambda_class_sizes(pair))
print("K-class sizes:", k_classes(pair).sizes)

# Products only depend on the classes of the factors.  The check below runs
# through every pair of elements and compares with the five by five table.

# In[3]:

report = lambda_mult_table_check(pair)
print("checked", report.checked, "products; ok:", report.ok)

# In[4]:

for n in range(2, 8):
    for rng in [(0, n - 1), (1, n - 1)] if n > 2 else [(0, 1)]:
        p = ChainPair.of(n, rng)
        print(p, gap_signature(p).gaps, lambda_class_sizes(p))
