import json
from pathlib import Path

from box import Box

# dotted access to the english catalog, the only one shipped with the module
cm = Box(
    json.loads((Path(__file__).parent / "en" / "en.json").read_text()),
    frozen_box=True,
)
