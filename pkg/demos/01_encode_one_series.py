"""Walk one series through every encoding stage, saving the intermediate images.

Run:  python demos/01_encode_one_series.py
"""

from pathlib import Path

import numpy as np

from timage import (
    EncodeConfig,
    TimeSeries,
    clamp_and_scale,
    distance_matrix,
    encode_series,
    quantize,
    resize_avg_pool,
    threshold_rp,
    write_gray_png,
    z_normalize,
)

out_dir = Path(__file__).parent / "output" / "stages"
out_dir.mkdir(parents=True, exist_ok=True)

# A noisy two-frequency signal: the slow component produces the large blocks
# in the image, the fast one the fine texture.
rng = np.random.default_rng(0)
t = np.arange(300)
raw = np.sin(2 * np.pi * t / 75) + 0.4 * np.sin(2 * np.pi * t / 11) + 0.05 * rng.standard_normal(t.size)
series = z_normalize(TimeSeries("demo", "train", "1", raw))

# Stage 1: pairwise distances.  sigma is the population std of all n^2 entries.
d = distance_matrix(series)
print(f"distance matrix: {d.n}x{d.n}, sigma={d.sigma:.4f}, max={d.entries.max():.4f}")

# Stage 2: cap at 3 sigma, then stretch to [0, 1].
plane = clamp_and_scale(d, clamp_k=3.0)
clipped = int((d.entries >= 3.0 * d.sigma).sum())
print(f"clamped {clipped} of {d.n * d.n} entries at 3 sigma")

# Stage 3: average-pool down to the target resolution.
pooled = resize_avg_pool(plane, 224)

# Stage 4: quantize to 8-bit grayscale and write a deterministic PNG.
image = quantize(pooled)
write_gray_png(image.pixels, out_dir / "distance_plot.png")

# The one-call version is byte-identical to the staged composition.
direct = encode_series(series, EncodeConfig(image_size=224))
assert (direct.pixels == image.pixels).all()

# For contrast: the classical thresholded recurrence plot loses the gray
# levels and needs an epsilon choice.
for eps in (0.5, 1.0, 2.0):
    bits = threshold_rp(d, eps).bits.astype(float)
    rp = quantize(resize_avg_pool(bits, 224))
    write_gray_png(rp.pixels, out_dir / f"thresholded_eps{eps}.png")
    print(f"epsilon={eps}: recurrence rate {bits.mean():.3f}")

print(f"images written to {out_dir}")
