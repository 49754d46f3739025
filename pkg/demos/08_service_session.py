"""Scripted annotation session against the HTTP service (in process).

Upload an image, attach ground truth, place one seed per region, run the
segmentation, then apply one hinted correction and watch the click
counter and accuracy move. The same flow the browser UI drives.
"""

import io

import numpy as np
from fastapi.testclient import TestClient
from PIL import Image as PILImage

from dglseg.service import create_app
from dglseg.synth import generate_synthetic


def png(arr, mode):
    buf = io.BytesIO()
    PILImage.fromarray(arr, mode=mode).save(buf, "PNG")
    return buf.getvalue()


image, annotation = generate_synthetic(2, 96, 72, layout_seed=21, separation=0.8)
image_png = png(np.rint(image.data * 255).astype(np.uint8), "RGB")
gt_png = png(annotation.label_field.astype(np.uint8), "L")

client = TestClient(create_app())

info = client.post("/v1/session", content=image_png).json()
sid = info["session_id"]
print(f"session {sid[:8]}...  {info['width']}x{info['height']}")

print("ground truth:", client.post(f"/v1/session/{sid}/groundtruth", content=gt_png).json())

regions = []
for label in (1, 2):
    pts = np.argwhere(annotation.label_field == label)
    r, c = pts[len(pts) // 2]
    regions.append({"label": label, "seeds": [{"row": int(r), "col": int(c), "side": 14}]})
print("inputs:", client.post(f"/v1/session/{sid}/inputs", json={"regions": regions}).json())

seg = client.post(f"/v1/session/{sid}/segment", json={
    "color_space": "RGB", "channel_selection": [0, 1, 2],
    "bins_per_channel": [8, 8, 8], "n_superpixels": 60, "compactness": 100.0,
}).json()
print(f"segment: {seg['k_actual']} superpixels, accuracy {seg['accuracy']:.4f}, "
      f"clicks {seg['clicks']}, {seg['timing_ms']:.0f} ms")

hint = seg["refinement_hint"]
if hint is None:
    print("nothing to refine; segmentation is already at the ceiling")
else:
    out = client.post(f"/v1/session/{sid}/relabel", json=hint).json()
    print(f"relabel superpixel {hint['superpixel']} -> region {hint['label']}: "
          f"accuracy {out['accuracy']:.4f}, clicks {out['clicks']}")

overlay = client.get(f"/v1/session/{sid}/overlay", params={"opacity": 0.45})
print(f"overlay: {len(overlay.content)} PNG bytes")
