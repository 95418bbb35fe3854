"""
Choosing fewer starting pixels
==============================

Each pixel gets the row-major code ``W*x + y``. A k-spec keeps only pixels
whose code is not a multiple of any of its divisors, so the kept pixels are
spread evenly over the image and the choice is fully deterministic.
"""

import numpy as np

from touristwalk import GrayImage, KSpec, fraction_for_spec, select_starts
from touristwalk.sampling import TABLE_SPECS, mask_image

# %%
# A 5x5 image: which codes survive k = 5, 3 and 2?
small = GrayImage(np.zeros((5, 5), np.uint8))
for k in (5, 3, 2):
    m = mask_image(small, KSpec((k,)))
    print(f"k={k}")
    print(np.where(m == 255, np.arange(25).reshape(5, 5), -1))

# %%
# Kept percentage on a 200x200 image against the asymptotic value from
# inclusion-exclusion.
big = GrayImage(np.zeros((200, 200), np.uint8))
for spec in TABLE_SPECS:
    sel = select_starts(big, spec)
    print(f"{str(spec):>5}: {100 * float(sel.kept_fraction):6.2f}%  "
          f"(asymptotic {100 * float(fraction_for_spec(spec)):6.2f}%)")

# %%
# Masks can be written as PGM files: 255 marks a start, 128 an ignored pixel.
# from touristwalk import export_mask
# export_mask(big, KSpec((2, 3)), "mask_2_3.pgm")
