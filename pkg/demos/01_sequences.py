"""Generate protocol sequences and view them as 2-D arrays.

A sequence of length L = p*q is a zero-one transmission schedule.  Its ones
live on an arithmetic progression in the residue grid Z_p x Z_q, one per
column, so every user transmits exactly q times per period (duty factor
1/p) and any p consecutive columns of a nonzero generator form a
permutation matrix.
"""

import numpy as np

from crtseq import CrtParams, Variant, generate_sequence
from crtseq.core import sequence_to_array

params = CrtParams(3, 5)
print(f"p={params.p} q={params.q} L={params.L}\n")
for g in range(params.p):
    seq = generate_sequence(g, params)
    print(f"generator {g}: {seq}   weight={seq.weight} duty={seq.duty_factor}")
    print(sequence_to_array(seq, params), "\n")

# The modified map rescales columns; used by the synchronization machinery.
mod = CrtParams(7, 8, Variant.MODIFIED)
print(f"modified map, p={mod.p} q={mod.q} (gamma={mod.gamma})")
for g in (1, 6):
    seq = generate_sequence(g, mod)
    print(f"generator {g}: ones at {[int(t) for t in np.flatnonzero(seq.bits)]}")
