"""
Writes one mkdocstrings stub per incoherify module into docs/reference/ and checks that the
hand-written `nav` in mkdocs.yml lists exactly those pages.

    python scripts/gen_ref_pages.py           # write stubs, warn about nav drift
    python scripts/gen_ref_pages.py --check   # also exit 1 on drift (CI)

`amr/graph.py` becomes `reference/incoherify/amr/graph.md`; a package `__init__.py` becomes the
package's `index.md`. docs/reference/ is gitignored and rebuilt before every docs build.
"""

import re
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
SRC = ROOT / "src"
PACKAGE = "incoherify"
DOCS = ROOT / "docs"
MKDOCS = ROOT / "mkdocs.yml"

_NAV_PAGE = re.compile(r"^\s*-\s+(?:[^:]+:\s+)?(reference/\S+\.md)\s*$")


def reference_pages() -> dict[str, str]:
    """Docs-relative page path -> dotted module documented on it."""
    pages: dict[str, str] = {}
    for path in sorted((SRC / PACKAGE).rglob("*.py")):
        parts = list(path.relative_to(SRC).with_suffix("").parts)
        if parts[-1] == "__main__":
            continue
        if parts[-1] == "__init__":
            parts.pop()
            page = Path("reference", *parts, "index.md")
        else:
            page = Path("reference", *parts).with_suffix(".md")
        pages[page.as_posix()] = ".".join(parts)
    return pages


def nav_pages() -> set[str]:
    lines = MKDOCS.read_text(encoding="utf-8").splitlines()
    return {m.group(1) for line in lines if (m := _NAV_PAGE.match(line))}


def main(check: bool = False) -> int:
    pages = reference_pages()
    for page, module in pages.items():
        dest = DOCS / page
        dest.parent.mkdir(parents=True, exist_ok=True)
        dest.write_text(f"::: {module}\n", encoding="utf-8")
    print(f"Wrote {len(pages)} reference page(s) to {(DOCS / 'reference').relative_to(ROOT)}/")

    listed = nav_pages()
    missing = sorted(set(pages) - listed)
    stale = sorted(listed - set(pages))
    for page in missing:
        print(f"  not in mkdocs.yml nav: {page}")
    for page in stale:
        print(f"  in nav but no module:  {page}")
    return 1 if check and (missing or stale) else 0


if __name__ == "__main__":
    sys.exit(main(check="--check" in sys.argv[1:]))
