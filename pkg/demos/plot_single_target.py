"""
Generating a scatterplot for one target measure
================================================

Ask for a point set whose monotonic measure is 1 (perfect rank
agreement between x and y) and another whose clumpy measure is high,
then look at what else came along for the ride.
"""

import numpy as np

from scagen import GeneratorConfig, generate
from scagen.io import emit_plot

# 30 points, placed 5 at a time
config = GeneratorConfig(n_total=30, n_init=5, seed=1)

monotone = generate({"monotonic": 1.0}, config)
print("monotonic achieved:", monotone.achieved.monotonic)
print("loss after each epoch:", np.round(monotone.per_epoch_losses, 4))

clumped = generate({"clumpy": 0.9}, config)
print("clumpy achieved:", clumped.achieved.clumpy)

# measures that were not targeted are free to drift
for name, value in clumped.achieved.as_dict().items():
    print(f"  {name:10s} {value:.3f}")

emit_plot(monotone.points, monotone.achieved, "monotonic.svg")
emit_plot(clumped.points, clumped.achieved, "clumpy.svg")
