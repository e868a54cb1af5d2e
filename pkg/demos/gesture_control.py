"""Walkthrough: decoding drag strokes into next/previous commands.

Chevron strokes drawn anywhere on the frame, at any size, decode to the same
command; scribbles fall below the accept threshold and come back
unrecognized.
"""

from streamtap.gesture import classify

strokes = {
    'tiny ">" top-left': [(0.10, 0.10), (0.14, 0.13), (0.10, 0.16)],
    'large ">" centered': [(0.30, 0.20), (0.70, 0.50), (0.30, 0.80)],
    'large "<" centered': [(0.70, 0.20), (0.30, 0.50), (0.70, 0.80)],
    'sloppy ">" drag': [(0.32, 0.18), (0.51, 0.29), (0.68, 0.52), (0.49, 0.71), (0.34, 0.79)],
    "scribble": [(0.42, 0.77), (0.13, 0.31), (0.66, 0.09), (0.25, 0.88), (0.71, 0.45)],
}

print(f"{'stroke':<22} {'command':<14} score")
for name, pts in strokes.items():
    result = classify(pts)
    print(f"{name:<22} {result.command:<14} {result.score:.3f}")

print("\ncustom template sets load from JSON; see streamtap.gesture.load_templates")
