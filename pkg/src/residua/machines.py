"""Toy register machines that reveal generator orders lazily.

A program is a tuple of instructions over unbounded non-negative
registers:

    ("INC", reg)          reg += 1
    ("DEC", reg)          reg -= 1 (floored at 0)
    ("JZ", reg, target)   jump to target when reg == 0
    ("JMP", target)
    ("HALT",)

The halting time counts every executed instruction, HALT included.
"""

import threading

from .errors import UnknownMachine


def _countdown(n, tail=()):
    """Load n into r0, then count it down to zero and halt."""
    prog = [("INC", 0)] * n
    loop = len(prog)
    prog += [("JZ", 0, loop + 3), ("DEC", 0), ("JMP", loop)]
    prog += list(tail) + [("HALT",)]
    return tuple(prog)


def _nested(outer, inner):
    """Two nested countdown loops; halting time grows like outer*inner."""
    prog = [("INC", 0)] * outer
    top = len(prog)
    # top: if r0 == 0 halt, else r0 -= 1 and run the inner loop
    body = [("JZ", 0, None), ("DEC", 0)]
    body += [("INC", 1)] * inner
    k = top + len(body)
    body += [("JZ", 1, top), ("DEC", 1), ("JMP", k)]
    prog += body
    end = len(prog)
    prog[top] = ("JZ", 0, end)
    prog.append(("HALT",))
    return tuple(prog)


# Machine table shipped with the lazily ordered preset.  Ids are the basis
# indices they govern.
MACHINES = {
    1: (("INC", 0), ("HALT",)),                          # halts, t = 2
    2: (("INC", 0),) * 4 + (("HALT",),),                 # halts, t = 5
    3: (("JMP", 0),),                                    # loops
    4: _countdown(3),                                    # halts, t = 14
    5: (("INC", 0), ("JMP", 0)),                         # loops, counter grows
    6: (("HALT",),),                                     # halts, t = 1
    7: _countdown(6),                                    # halts, t = 26
    8: (("JZ", 0, 0),),                                  # loops on the zero test
    9: _nested(12, 20),                                  # halts late
    10: (("INC", 0), ("DEC", 0), ("JMP", 0)),           # loops
}


def run(program, budget):
    """Simulate for at most ``budget`` steps.  Returns the halting time or None."""
    regs = {}
    pc = 0
    steps = 0
    n = len(program)
    while steps < budget:
        if pc >= n:
            # falling off the end counts as halting on that step
            return steps + 1
        ins = program[pc]
        steps += 1
        op = ins[0]
        if op == "HALT":
            return steps
        if op == "INC":
            regs[ins[1]] = regs.get(ins[1], 0) + 1
            pc += 1
        elif op == "DEC":
            v = regs.get(ins[1], 0)
            regs[ins[1]] = v - 1 if v else 0
            pc += 1
        elif op == "JZ":
            pc = ins[2] if regs.get(ins[1], 0) == 0 else pc + 1
        elif op == "JMP":
            pc = ins[1]
        else:
            raise ValueError(f"bad instruction {ins!r}")
    return None


class HaltCache:
    """Thread-safe memo of halting times.

    For each machine we remember the largest budget tried without halting,
    or the exact halting time once seen.  That makes answers monotone in
    the budget: a known halting time never changes.
    """

    def __init__(self, table=None):
        self.table = MACHINES if table is None else table
        self._lock = threading.Lock()
        self._halt = {}
        self._tried = {}

    def program(self, mid):
        try:
            return self.table[mid]
        except KeyError:
            raise UnknownMachine(f"no machine with id {mid}") from None

    def halting_time(self, mid, budget):
        prog = self.program(mid)
        with self._lock:
            if mid in self._halt:
                t = self._halt[mid]
                return t if t <= budget else None
            if self._tried.get(mid, -1) >= budget:
                return None
        t = run(prog, budget)
        with self._lock:
            if t is not None:
                self._halt[mid] = t
            else:
                self._tried[mid] = max(self._tried.get(mid, -1), budget)
        return t


HALTS = HaltCache()
