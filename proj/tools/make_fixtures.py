#!/usr/bin/env python3
"""Regenerate the photo fixtures under data/fixtures from scikit-image's bundled samples.

Each photo is resized (aspect preserved, Lanczos) to cover the target frame and
center-cropped, so every fixture is an exact multiple of the 28-pixel tile size.
"""
import argparse
import os

from PIL import Image
from skimage import data

# name -> (loader, license note)
SOURCES = {
    "motorcycle": (lambda: data.stereo_motorcycle()[0], "Middlebury stereo dataset, free for research use"),
    "coffee": (data.coffee, "Rachel Michetti, CC0"),
    "chelsea": (data.chelsea, "Stefan van der Walt, CC0"),
    "rocket": (data.rocket, "SpaceX, CC0"),
    "ihc": (data.immunohistochemistry, "Wikimedia Commons, public domain"),
}

FRAMES = {
    "432": (672, 504),  # 24 x 18 tiles of 28 px
    "108": (336, 252),  # 12 x 9 tiles of 28 px
}


def cover_crop(img, width, height):
    scale = max(width / img.width, height / img.height)
    w = max(width, round(img.width * scale))
    h = max(height, round(img.height * scale))
    img = img.resize((w, h), Image.LANCZOS)
    left = (w - width) // 2
    top = (h - height) // 2
    return img.crop((left, top, left + width, top + height))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "data", "fixtures"))
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    for name, (loader, _) in SOURCES.items():
        img = Image.fromarray(loader()).convert("RGB")
        for tag, (w, h) in FRAMES.items():
            cover_crop(img, w, h).save(os.path.join(args.out, f"{name}_{tag}.png"), optimize=True)


if __name__ == "__main__":
    main()
