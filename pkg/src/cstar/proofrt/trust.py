"""
CStar - Trust Report

Axiom and oracle tags that the theorems accepted during a run depend on.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Set

from cstar.kernel.thm import Theorem

logger = logging.getLogger(__name__)


@dataclass
class TrustReport:
    """Append-only record of the tags behind accepted theorems."""

    tags: Set[str] = field(default_factory=set)
    theorems: int = 0

    def record(self, th: Theorem) -> None:
        new = set(th.axioms) - self.tags
        if new:
            logger.debug(f"trust report: new tags {sorted(new)}")
        self.tags |= set(th.axioms)
        self.theorems += 1

    def sorted_tags(self) -> List[str]:
        return sorted(self.tags)

    def to_dict(self) -> Dict[str, object]:
        return {"theorems": self.theorems, "tags": self.sorted_tags()}
