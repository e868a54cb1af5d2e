"""streamtap: direct spatial input from livestream viewers into streamed applications.

Viewers click and drag on the video frame; a websocket relay validates and
routes those events (plus per-user context from a side panel) to the streamer's
application, which resolves them against the historical camera state the
viewer actually saw. Ships with four headless reference apps, a deterministic
multi-viewer simulation harness (`simcli`), and a browser viewer client.
"""

__version__ = "0.1.0"
