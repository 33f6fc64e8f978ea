"""Write group files for the built-in catalog constructions into the data directory.

    python3 scripts/emit_builtins.py

The package builds these groups itself; the files are for the command line
(e.g. ``udk certify --group data/sl2_5_dim2.json``) and for round-trip tests.
"""
from pathlib import Path

from udk import catalog

DATA = Path(__file__).resolve().parents[1] / "src" / "udk" / "data"

if __name__ == "__main__":
    for name in catalog.names():
        if catalog.entry(name).kind == "built-in":
            print(catalog.emit(name, DATA / f"{name}.json"))
