"""Relative-accuracy histograms: comparing a result table against baselines.

Uses made-up accuracy tables to show the binning, the exact better/equal/worse
bookkeeping, and the CSV artifacts.

Run:  python demos/03_compare_results.py
"""

from pathlib import Path

from timage import relative_accuracy_histogram, render_report

out = Path(__file__).parent / "output" / "comparisons"

ours = {
    "Waves": 0.98, "Pulses": 0.80, "Drifts": 0.62, "Steps": 0.75,
    "Chirps": 0.91, "Bumps": 0.55, "Tones": 0.70,
}
published_a = {
    "Waves": 0.95, "Pulses": 0.80, "Drifts": 0.70, "Steps": 0.74,
    "Chirps": 0.96, "Bumps": 0.50, "Tones": 0.70,
}
published_b = {ds: min(1.0, a + 0.05) for ds, a in ours.items()}

histograms = {
    "vs_method_a": relative_accuracy_histogram(ours, published_a),
    "vs_method_b": relative_accuracy_histogram(ours, published_b),
}

for name, h in histograms.items():
    print(f"{name}: better={h.better} equal={h.equal} worse={h.worse} of {h.total}")
    for lo, hi, count in zip(h.bin_edges, h.bin_edges[1:], h.counts):
        bar = "#" * count
        print(f"  [{lo:+.2f}, {hi:+.2f})  {count:2d} {bar}")

# Swapping the arguments flips better and worse but never equal.
swapped = relative_accuracy_histogram(published_a, ours)
assert (swapped.better, swapped.worse) == (histograms["vs_method_a"].worse,
                                           histograms["vs_method_a"].better)

render_report([], histograms, out)
print(f"histogram CSVs written to {out}")
