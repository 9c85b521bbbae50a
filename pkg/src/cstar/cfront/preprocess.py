"""
CStar - Include Expansion

Textual `#include` expansion. Each file is included at most once. The result
keeps an origin map so diagnostics can name the file and line a piece of the
expanded text came from.
"""

import logging
import os
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from cstar.errors import ParseError

logger = logging.getLogger(__name__)

PRELUDE_NAME = "cstarlib.h"


def prelude_dir() -> str:
    """Directory holding the shipped proof-support library."""
    return os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "lib")


@dataclass
class Expanded:
    """Expanded source text plus, per output line, its (file, line) origin."""

    text: str
    origins: List[Tuple[str, int]] = field(default_factory=list)
    files: List[str] = field(default_factory=list)

    def origin(self, line: int) -> Tuple[Optional[str], Optional[int]]:
        if 1 <= line <= len(self.origins):
            return self.origins[line - 1]
        return None, None


class Preprocessor:
    """Expands `#include "file"` and `#include <file>` directives."""

    def __init__(self, include_dirs: Sequence[str] = (), prelude: bool = True,
                 already_included: Sequence[str] = ()):
        """Initialize the preprocessor.

        Args:
            include_dirs (list): Directories searched after the including file's own
            prelude (bool): Whether cstarlib.h is included implicitly
            already_included (list): Files expanded by an earlier run; not included again
        """
        self.include_dirs = list(include_dirs) + [prelude_dir()]
        self.prelude = prelude
        self.already_included = [os.path.realpath(p) for p in already_included]
        self._seen: List[str] = []

    def expand_file(self, path: str) -> Expanded:
        with open(path, "r", encoding="utf-8") as fh:
            source = fh.read()
        return self.expand(source, path)

    def expand(self, source: str, name: str = "<input>") -> Expanded:
        self._seen = list(self.already_included)
        out = Expanded(text="")
        lines: List[str] = []
        if self.prelude:
            prelude = self._resolve(PRELUDE_NAME, None, name, 0)
            self._include(prelude, lines, out)
        if os.path.isfile(name):
            self._seen.append(os.path.realpath(name))
        self._expand_lines(source, name, lines, out)
        out.text = "\n".join(lines) + ("\n" if lines else "")
        return out

    def _include(self, path: str, lines: List[str], out: Expanded) -> None:
        real = os.path.realpath(path)
        if real in self._seen:
            return
        self._seen.append(real)
        out.files.append(path)
        logger.debug(f"including {path}")
        with open(path, "r", encoding="utf-8") as fh:
            self._expand_lines(fh.read(), path, lines, out)

    def _expand_lines(self, source: str, name: str, lines: List[str], out: Expanded) -> None:
        for number, line in enumerate(source.split("\n"), start=1):
            stripped = line.strip()
            if stripped.startswith("#"):
                directive = stripped[1:].strip()
                if directive.startswith("include"):
                    target = self._target(directive[len("include"):].strip(), name, number)
                    self._include(self._resolve(target, name, name, number), lines, out)
                    continue
                if directive.startswith("pragma") or directive == "":
                    lines.append("")
                    out.origins.append((name, number))
                    continue
                raise ParseError(f"unsupported preprocessor directive #{directive.split()[0]}",
                                 name, number)
            lines.append(line)
            out.origins.append((name, number))

    @staticmethod
    def _target(spec: str, name: str, number: int) -> str:
        if len(spec) >= 2 and spec[0] == '"' and spec[-1] == '"':
            return spec[1:-1]
        if len(spec) >= 2 and spec[0] == "<" and spec[-1] == ">":
            return spec[1:-1]
        raise ParseError(f"malformed #include {spec}", name, number)

    def _resolve(self, target: str, including: Optional[str], name: str, number: int) -> str:
        candidates = []
        if including and os.path.isfile(including):
            candidates.append(os.path.join(os.path.dirname(os.path.abspath(including)), target))
        candidates.extend(os.path.join(d, target) for d in self.include_dirs)
        for candidate in candidates:
            if os.path.isfile(candidate):
                return candidate
        raise ParseError(f"cannot find include file {target}", name, number or None)
