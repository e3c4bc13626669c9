"""Drive the HTTP service end to end with plain stdlib clients.

Starts the app on a background thread, uploads predictions, edits one
annotation over HTTP, asks the server to evaluate, and prints the numbers
the labeling UI would show. No test harness involved: real sockets.
"""

import json
import os
import tempfile
import threading
import time
import urllib.request

import uvicorn

from guideval import (
    DatasetManifest,
    DirectionAngle,
    FrameRecord,
    HumanAnnotation,
    quantize,
)
from guideval.service import SessionState, create_app

PORT = 8906
BASE = f"http://127.0.0.1:{PORT}"


def call(method, path, payload=None):
    data = None if payload is None else json.dumps(payload).encode()
    req = urllib.request.Request(
        BASE + path, data=data, method=method,
        headers={"content-type": "application/json"},
    )
    with urllib.request.urlopen(req) as resp:
        return json.loads(resp.read())


# a six-frame session; gt angles picked so one prediction will disagree
rows = [("a", -40.0), ("b", -10.0), ("c", 0.0), ("d", 15.0), ("e", 40.0), ("f", 70.0)]
root = tempfile.mkdtemp(prefix="guideval_service_")
frames = []
for fid, _ in rows:
    with open(os.path.join(root, f"{fid}.png"), "wb") as fh:
        fh.write(b"\x89PNG\r\n\x1a\nstub")
    frames.append(FrameRecord(frame_id=fid, source=f"{fid}.png", width=640, height=480))
manifest = DatasetManifest(dataset_id="live", frames=tuple(frames), root=root)

annotations = [
    HumanAnnotation(frame_id=fid, direction=quantize(a), explicit_angle=DirectionAngle(a))
    for fid, a in rows
]
session_file = os.path.join(root, "session.jsonl")
state = SessionState(manifest, annotations, annotations_path=session_file)

server = uvicorn.Server(
    uvicorn.Config(create_app(state), host="127.0.0.1", port=PORT, log_level="warning")
)
thread = threading.Thread(target=server.run, daemon=True)
thread.start()
while not server.started:
    time.sleep(0.02)

print("frames on the server:", [f["frame_id"] for f in call("GET", "/api/frames")])

# predictions: perfect except frame "d", which lands 25 degrees off
upload = [
    {"schema_version": 1, "frame_id": fid, "angle": a if fid != "d" else a + 25.0,
     "method_name": "demo"}
    for fid, a in rows
]
print("upload:", call("POST", "/api/predictions/demo", upload))


def show_evaluation(label):
    doc = call("POST", "/api/evaluate", {"method_name": "demo"})
    agg = doc["aggregate"]
    print()
    print(f"{label}: mean soft {agg['mean_soft_accuracy']:.2f}%  "
          f"exact {agg['exact_match_rate']:.2f}%  levels {agg['level_distribution']}")
    worst = min(doc["per_frame"], key=lambda r: r["soft_accuracy"])
    print(f"  worst frame: {worst['frame_id']} "
          f"(gt {worst['gt_direction']}, predicted {worst['pred_angle']:+.1f} deg, "
          f"deviation {worst['deviation']:.1f} deg, soft {worst['soft_accuracy']:.4f})")


show_evaluation("before review")

# reviewing the worst frame, the annotator decides the walkable area really
# was further left and revises the ground truth over HTTP
edit = {
    "schema_version": 1,
    "direction": "slight_left",
    "explicit_angle": 38.0,
    "annotator": "demo",
    "created_at": "2026-08-02T10:00:00Z",
}
print()
print("edit revision:", call("PUT", "/api/annotations/d", edit))

show_evaluation("after review")

server.should_exit = True
thread.join(timeout=10)

with open(session_file) as fh:
    saved = fh.read().splitlines()
print()
print(f"shutdown flushed {len(saved)} annotations to {session_file}")
print("frame d on disk:", json.loads(saved[3])["direction"])
