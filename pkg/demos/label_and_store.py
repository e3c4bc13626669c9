"""Create a small dataset, annotate it two ways, and round-trip the files.

Shows the two kinds of human decision the store accepts: a rectangle around
the walkable region (the reference angle is derived from its centroid), and
a bare direction choice when no rectangle makes sense.
"""

import os
import tempfile

from guideval import (
    DatasetManifest,
    FrameRecord,
    HumanAnnotation,
    Roi,
    SimplifiedDirection,
    derive_gt_angle,
    load_annotations,
    quantize,
    save_annotations,
    save_dataset,
)

root = tempfile.mkdtemp(prefix="guideval_label_")
os.makedirs(os.path.join(root, "images"))

frames = []
for i in range(4):
    name = f"walk_{i:02d}"
    # stand-in pixels; any image bytes work, the store never decodes them
    with open(os.path.join(root, "images", f"{name}.png"), "wb") as fh:
        fh.write(b"\x89PNG\r\n\x1a\nstub")
    frames.append(
        FrameRecord(frame_id=name, source=f"images/{name}.png", width=640, height=480)
    )

manifest = DatasetManifest(dataset_id="sidewalk-demo", frames=tuple(frames))
save_dataset(manifest, os.path.join(root, "manifest.json"))

annotations = [
    # crosswalk entrance slightly to the left: rectangle decision
    HumanAnnotation(frame_id="walk_00", roi=Roi(x=180, y=140, width=120, height=90)),
    # dead ahead
    HumanAnnotation(frame_id="walk_01", roi=Roi(x=290, y=100, width=60, height=120)),
    # obstacle scene where only the instruction was recorded
    HumanAnnotation(frame_id="walk_02", direction=SimplifiedDirection.SHARP_RIGHT),
    # both: the annotator dragged a box and confirmed the suggested direction
    HumanAnnotation(
        frame_id="walk_03",
        roi=Roi(x=420, y=160, width=100, height=80),
        direction=SimplifiedDirection.SLIGHT_RIGHT,
    ),
]

path = os.path.join(root, "annotations.jsonl")
save_annotations(annotations, path)
loaded = load_annotations(path, manifest)
assert loaded == annotations
print(f"round-tripped {len(loaded)} annotations through {path}")
print()

by_id = manifest.frames_by_id()
for ann in loaded:
    if ann.roi is None:
        print(f"{ann.frame_id}: direction {ann.direction.token} (no rectangle)")
        continue
    angle = derive_gt_angle(ann, by_id[ann.frame_id])
    print(
        f"{ann.frame_id}: centroid {ann.roi.centroid} -> {angle.degrees:+.2f} deg"
        f" -> {quantize(angle).token}"
    )
