"""atlas: an end-to-end knowledge-map engine.

Pipeline (ingest, embed, layout, topics) -> artifacts -> exploration
service (map, search, summaries, timeline, synthesis).
"""

__version__ = "0.1.0"

from .reducer import LAYOUT_BACKEND  # noqa: F401
