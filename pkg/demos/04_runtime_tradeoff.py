"""
Runtime against the share of starting pixels
============================================

Only the walks and the accumulation of their (transient, period) counts are
timed. Each cell gets one untimed warm-up run, and the median of the timed
repetitions is reported.
"""

import numpy as np

from touristwalk.bench import run_bench
from touristwalk.sampling import ALL, KSpec
from touristwalk.textures import DEFAULT_CLASSES
from touristwalk.walk import Rule

# %%
rng = np.random.default_rng(1)
images = [DEFAULT_CLASSES[i].sample(200, rng) for i in range(5)]
specs = [ALL, KSpec((10,)), KSpec((5,)), KSpec((2,)), KSpec((2, 3))]

suite = run_bench(images, specs, range(7), (Rule.MIN,), repetitions=3)
print(suite.environment)

# %%
rows = suite.aggregate()
mus = sorted({r["mu"] for r in rows})
print("kept%  " + "  ".join(f"mu={m:<5}" for m in mus))
for spec in specs:
    cells = {r["mu"]: r for r in rows if r["k_spec"] == str(spec)}
    pct = cells[mus[0]]["kept_pct"]
    print(f"{pct:5.1f}  " + "  ".join(f"{cells[m]['median_wall_time_ms']:7.1f}" for m in mus))

# %%
# emit_report(suite, "bench.csv") writes the raw records and bench_aggregate.csv.
