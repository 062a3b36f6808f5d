# coding: utf-8

# # A chain of nine points and its five even positions
#
# X is the chain 0 < 1 < ... < 8 and X' = {0, 2, 4, 6, 8}.  Printed labels
# below are shifted by one, so the chain reads 1..9 and X' reads 1,3,5,7,9.

# In[1]:

from ordsemi.chains import ChainPair, gap_signature
from ordsemi.structures import adjusted_chain, partial_graph
from ordsemi.transformations import Transformation, compose, count_top

pair = ChainPair.of(9, [0, 2, 4, 6, 8])
labels = range(1, 10)
print(pair)
print("gap signature:", gap_signature(pair).gaps)
print("adjusted chain:", adjusted_chain(pair).render(labels))

# The order-preserving maps X -> X' are counted by stars and bars.

# In[2]:

print("order-preserving maps:", count_top(pair))

# # The partial graph of one map
#
# The map below is allowed to send X anywhere inside X'; it is not
# order-preserving.  Its partial graph keeps only the arrows leaving X'.

# In[3]:

alpha = Transformation(pair, (0, 4, 0, 8, 4, 4, 4, 2, 4))
print(alpha.two_row(labels))
g = partial_graph(alpha)
print("upper:", [x + 1 for x in g.upper])
print("lower:", [x + 1 for x in g.lower])
print("edges:", [(u + 1, v + 1) for u, v in g.edges])
print("components:", g.n_components)

# The lower vertices 3 and 9 get no arrow from X'.  They are hit only by 8
# and 4, which lie outside X', so each one is a component on its own.

# In[4]:

for upper, lower in g.components():
    print([u + 1 for u in upper], "->", lower + 1)

# Composition runs left to right: x(ab) = (xa)b.  Squaring this map sends
# 4 through 9 on to 5.

# In[5]:

print(compose(alpha, alpha).two_row(labels))

# The DOT text pins upper and lower vertices on two ordered rows.

# In[6]:

print(g.to_dot(labels))
