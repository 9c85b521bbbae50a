"""
CStar - C Type Information

Sizes, value ranges and byte encodings of the C types known to the logic.
Values are stored little-endian, two's complement for signed types.
"""

from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from cstar.errors import SemanticsError


@dataclass(frozen=True)
class CTypeInfo:
    name: str
    size: int
    lo: int
    hi: int

    def valid(self, value: int) -> bool:
        return self.lo <= value <= self.hi

    def encode(self, value: int) -> Tuple[int, ...]:
        """Bytes of value, lowest address first."""
        if not self.valid(value):
            raise SemanticsError(f"value {value} is out of range for {self.name}")
        raw = value % (1 << (8 * self.size))
        return tuple((raw >> (8 * i)) & 0xFF for i in range(self.size))

    def decode(self, data: Tuple[int, ...]) -> int:
        raw = sum(b << (8 * i) for i, b in enumerate(data))
        if self.lo < 0 and raw > self.hi:
            raw -= 1 << (8 * self.size)
        return raw


CTYPES: Dict[str, CTypeInfo] = {
    "Tchar": CTypeInfo("Tchar", 1, -128, 127),
    "Tuchar": CTypeInfo("Tuchar", 1, 0, 255),
    "Tint": CTypeInfo("Tint", 4, -(2**31), 2**31 - 1),
    "Tptr": CTypeInfo("Tptr", 8, 0, 2**64 - 1),
}

# C spelling of each logical ctype constant.
C_SPELLINGS = {
    "char": "Tchar",
    "signed char": "Tchar",
    "unsigned char": "Tuchar",
    "int": "Tint",
    "signed int": "Tint",
    "pointer": "Tptr",
}


def ctype_info(name: str) -> CTypeInfo:
    try:
        return CTYPES[name]
    except KeyError:
        raise SemanticsError(f"unknown C type {name}") from None


def sizeof(name: str) -> Optional[int]:
    info = CTYPES.get(name)
    return info.size if info else None
