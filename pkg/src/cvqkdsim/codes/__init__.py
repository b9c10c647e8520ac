"""Bundled example LDPC codes (alist files plus characterization fixtures)."""

import json
from importlib import resources

from ..postproc.ldpc import LdpcCode, load_alist

EXAMPLE_CODE = "rate01_n10000"


def load_example_code(name: str = EXAMPLE_CODE) -> LdpcCode:
    ref = resources.files(__package__) / f"{name}.alist"
    with resources.as_file(ref) as path:
        return load_alist(path)


def load_characterization(name: str = EXAMPLE_CODE) -> dict:
    ref = resources.files(__package__) / f"{name}.json"
    return json.loads(ref.read_text())
