"""Sample the five soft-accuracy curves and export them as CSV and SVG.

Run from anywhere; output lands in a temp directory whose path is printed.
"""

import os
import tempfile

import numpy as np

from guideval import SimplifiedDirection, render_criterion_curves, soft_accuracy_sweep

angles = np.linspace(-90.0, 90.0, 181)

# quick terminal sketch before writing files: one row per direction,
# one character per 4 degrees
for direction in SimplifiedDirection:
    values = soft_accuracy_sweep(direction, angles[::4])
    bar = "".join(" .:-=+*#"[int(v * 7.999)] for v in values)
    print(f"{direction.token:>12} |{bar}|")
print(f"{'':>12}  -90{'':>18}0{'':>18}+90")

out_dir = tempfile.mkdtemp(prefix="guideval_curves_")
csv_path = os.path.join(out_dir, "curves.csv")
svg_path = os.path.join(out_dir, "curves.svg")

with open(csv_path, "w") as fh:
    fh.write(render_criterion_curves(step=0.5, format="csv"))
with open(svg_path, "w") as fh:
    fh.write(render_criterion_curves(step=0.5, format="svg"))

print()
print("wrote", csv_path)
print("wrote", svg_path)

# a few spot values: the plateau edge, mid-ramp, and past the cutoff
for a in (20.0, 27.5, 35.0):
    v = float(soft_accuracy_sweep(SimplifiedDirection.STRAIGHT, [a])[0])
    print(f"straight at {a:5.1f} deg -> {v:.6f}")
