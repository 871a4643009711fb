"""Fail when pyproject.toml and primon.__version__ disagree (exit 1: missing, 2: mismatch)."""

import pathlib
import re
import sys

ROOT = pathlib.Path(__file__).resolve().parents[1]


def read_versions(root: pathlib.Path = ROOT) -> tuple[str | None, str | None]:
    pyproj = (root / "pyproject.toml").read_text(encoding="utf-8")
    pkg = (root / "src/primon/__init__.py").read_text(encoding="utf-8")
    m1 = re.search(r'\nversion\s*=\s*"([^"]+)"', pyproj)
    m2 = re.search(r'__version__\s*=\s*"([^"]+)"', pkg)
    return (m1.group(1) if m1 else None, m2.group(1) if m2 else None)


def main(root: pathlib.Path = ROOT) -> int:
    v1, v2 = read_versions(root)
    if not (v1 and v2):
        print("Could not find version in pyproject.toml or src/primon/__init__.py")
        return 1
    if v1 != v2:
        print(f"Version mismatch: pyproject.toml={v1} vs __init__={v2}")
        return 2
    print(f"Version OK: {v1}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
