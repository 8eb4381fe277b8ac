import os
from pathlib import Path
from typing import Iterable, List, Tuple

from ajlint.errors import InputError

SOURCE_EXTENSION = ".ajml"


def collect_sources(paths: Iterable[str]) -> List[str]:
    """
    Expand input paths into the sorted, de-duplicated list of AJML files

    Args:
        paths: Files or directories; directories are searched recursively for ``*.ajml``

    Returns:
        File paths in a stable order independent of the argument order

    Raises:
        InputError: for a path that does not exist
    """
    found = set()
    for raw in paths:
        path = Path(raw)
        if path.is_dir():
            for candidate in path.rglob(f"*{SOURCE_EXTENSION}"):
                if candidate.is_file():
                    found.add(os.path.normpath(str(candidate)))
        elif path.is_file():
            found.add(os.path.normpath(str(path)))
        else:
            raise InputError("no such file or directory", raw)
    return sorted(found)


def read_source(file_path: str) -> str:
    """
    Read an AJML file as UTF-8 text

    Raises:
        InputError: when the file cannot be read or is not valid UTF-8
    """
    try:
        with open(file_path, "r", encoding="utf-8", newline="") as f:
            return f.read()
    except (OSError, UnicodeDecodeError) as e:
        raise InputError(f"cannot read file: {e}", file_path) from e


def read_sources(paths: Iterable[str]) -> List[Tuple[str, str]]:
    """(file name, text) for every AJML file under ``paths``"""
    return [(file_path, read_source(file_path)) for file_path in collect_sources(paths)]
