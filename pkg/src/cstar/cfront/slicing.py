"""
CStar - Slicing

Translation stage: every function body is flattened into a stream of
execution events, cut at its proof blocks into segments, and the segments
are interleaved with the proof blocks into an operational proof program.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

from cstar.cfront import ast

logger = logging.getLogger(__name__)

# ---------------------------------------------------------------------------
# Events
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FuncEntry:
    """Spec processing: parameters bound, precondition assumed."""

    line: int = 0


@dataclass(frozen=True)
class FuncExit:
    """Falling off the end of the body."""

    line: int = 0


@dataclass(frozen=True)
class Simple:
    """A statement without nested statements."""

    stmt: ast.Stmt


@dataclass(frozen=True)
class IfBegin:
    cond: ast.Expr
    line: int = 0


@dataclass(frozen=True)
class ElseBegin:
    line: int = 0


@dataclass(frozen=True)
class IfEnd:
    line: int = 0


@dataclass(frozen=True)
class WhileBegin:
    cond: ast.Expr
    invariant: Optional[str]
    line: int = 0


@dataclass(frozen=True)
class WhileEnd:
    line: int = 0


@dataclass(frozen=True)
class BlockBegin:
    line: int = 0


@dataclass(frozen=True)
class BlockEnd:
    line: int = 0


Event = Union[FuncEntry, FuncExit, Simple, IfBegin, ElseBegin, IfEnd, WhileBegin, WhileEnd,
              BlockBegin, BlockEnd]


def flatten(body: Tuple[ast.Stmt, ...]) -> List[Union[Event, ast.ProofBlock]]:
    """Event stream of a statement list, proof blocks left in place."""
    out: List[Union[Event, ast.ProofBlock]] = []
    for stmt in body:
        if isinstance(stmt, ast.ProofBlock):
            out.append(stmt)
        elif isinstance(stmt, ast.If):
            out.append(IfBegin(stmt.cond, stmt.line))
            out.extend(flatten(stmt.then))
            if stmt.orelse is not None:
                out.append(ElseBegin(stmt.line))
                out.extend(flatten(stmt.orelse))
            out.append(IfEnd(stmt.line))
        elif isinstance(stmt, ast.While):
            out.append(WhileBegin(stmt.cond, stmt.invariant, stmt.line))
            out.extend(flatten(stmt.body))
            out.append(WhileEnd(stmt.line))
        elif isinstance(stmt, ast.Block):
            out.append(BlockBegin(stmt.line))
            out.extend(flatten(stmt.body))
            out.append(BlockEnd(stmt.line))
        else:
            out.append(Simple(stmt))
    return out


def reconstruct(stream: List[Union[Event, ast.ProofBlock]]) -> Tuple[ast.Stmt, ...]:
    """Inverse of flatten; entry and exit events are skipped."""
    items = [e for e in stream if not isinstance(e, (FuncEntry, FuncExit))]
    pos = 0

    def block(stop: Tuple[type, ...]) -> Tuple[ast.Stmt, ...]:
        nonlocal pos
        stmts: List[ast.Stmt] = []
        while pos < len(items) and not isinstance(items[pos], stop):
            event = items[pos]
            pos += 1
            if isinstance(event, ast.ProofBlock):
                stmts.append(event)
            elif isinstance(event, Simple):
                stmts.append(event.stmt)
            elif isinstance(event, IfBegin):
                then = block((ElseBegin, IfEnd))
                orelse = None
                if isinstance(items[pos], ElseBegin):
                    pos += 1
                    orelse = block((IfEnd,))
                pos += 1
                stmts.append(ast.If(event.cond, then, orelse, event.line))
            elif isinstance(event, WhileBegin):
                body = block((WhileEnd,))
                pos += 1
                stmts.append(ast.While(event.cond, event.invariant, body, event.line))
            elif isinstance(event, BlockBegin):
                body = block((BlockEnd,))
                pos += 1
                stmts.append(ast.Block(body, event.line))
            else:
                raise ValueError(f"unbalanced event stream at {event}")
        return tuple(stmts)

    return block(())


# ---------------------------------------------------------------------------
# Segments and the operational proof program
# ---------------------------------------------------------------------------


@dataclass
class Segment:
    """Events between two proof blocks of one function, with entry context.

    loop_depth and variables describe the point where the segment starts.
    """

    function: ast.FuncDef
    index: int
    events: Tuple[Event, ...]
    loop_depth: int = 0
    variables: Dict[str, ast.CType] = field(default_factory=dict)

    @property
    def name(self) -> str:
        return f"seg{self.index}"

    @property
    def line(self) -> int:
        for event in self.events:
            line = event.stmt.line if isinstance(event, Simple) else event.line
            if line:
                return line
        return self.function.line

    def statements(self) -> Tuple[ast.Stmt, ...]:
        return reconstruct(list(self.events))


def slice_segments(func: ast.FuncDef) -> List[Union[Segment, ast.ProofBlock]]:
    """Cut a function body at its proof blocks.

    Args:
        func (FuncDef): A function definition

    Returns:
        list: Segment, ProofBlock, Segment, ... starting and ending with a
            segment; the first carries FuncEntry and the last FuncExit
    """
    stream: List[Union[Event, ast.ProofBlock]] = [FuncEntry(func.line)]
    stream.extend(flatten(func.body or ()))
    stream.append(FuncExit(func.line))

    result: List[Union[Segment, ast.ProofBlock]] = []
    current: List[Event] = []
    scopes: List[Dict[str, ast.CType]] = [{p.name: p.ty for p in func.params}]
    depth = 0
    start_depth, start_vars = 0, dict(scopes[0])

    def close() -> None:
        result.append(Segment(func, len([r for r in result if isinstance(r, Segment)]) + 1,
                              tuple(current), start_depth, start_vars))

    for event in stream:
        if isinstance(event, ast.ProofBlock):
            close()
            result.append(event)
            current = []
            start_depth = depth
            start_vars = {k: v for scope in scopes for k, v in scope.items()}
            continue
        current.append(event)
        if isinstance(event, (IfBegin, WhileBegin, BlockBegin)):
            scopes.append({})
            depth += isinstance(event, WhileBegin)
        elif isinstance(event, ElseBegin):
            scopes[-1] = {}
        elif isinstance(event, (IfEnd, WhileEnd, BlockEnd)):
            scopes.pop()
            depth -= isinstance(event, WhileEnd)
        elif isinstance(event, Simple) and isinstance(event.stmt, ast.Decl):
            scopes[-1][event.stmt.name] = event.stmt.ty
    close()
    logger.debug(f"{func.name}: {len(result) // 2 + 1} segments")
    return result


@dataclass
class Driver:
    """Per-function main: segment feeds alternating with local proof blocks."""

    function: ast.FuncDef
    steps: List[Union[Segment, ast.ProofBlock]]

    @property
    def segments(self) -> List[Segment]:
        return [s for s in self.steps if isinstance(s, Segment)]

    @property
    def proof_blocks(self) -> List[ast.ProofBlock]:
        return [s for s in self.steps if isinstance(s, ast.ProofBlock)]


@dataclass
class ProofProgram:
    program: ast.CProgram
    global_proofs: Tuple[ast.ProofBlock, ...]
    drivers: List[Driver]

    def render(self) -> str:
        """Readable listing of the operational program."""
        lines = [block.text.strip() for block in self.global_proofs]
        for driver in self.drivers:
            lines.append(f"void verify_{driver.function.name}(void) {{")
            for step in driver.steps:
                if isinstance(step, Segment):
                    lines.append(f"  feed_program_segment({step.name});")
                else:
                    lines.extend("  " + text for text in step.text.strip().splitlines())
            lines.append("}")
        return "\n".join(lines) + "\n"


def assemble_operational_program(program: ast.CProgram) -> ProofProgram:
    """Global proof blocks first, then one driver per function in source order."""
    drivers = [Driver(f, slice_segments(f)) for f in program.functions]
    logger.info(
        f"assembled {len(drivers)} drivers and {len(program.global_proofs)} global proof blocks"
    )
    return ProofProgram(program, program.global_proofs, drivers)
