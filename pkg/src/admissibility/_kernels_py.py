"""Pure-Python scan kernel.

Semantics are mirrored exactly by the compiled variant in ``_kernels.pyx``;
``admissibility.kernels`` picks whichever is importable.  The kernel
enumerates the cartesian product of per-generator candidate lists, keeps the
assignments whose postfix programs all evaluate to the identity (and that
generate the group, when asked), and either counts them or stops at the first
hit.
"""

from __future__ import annotations

OP_GEN = 0
OP_MUL = 1
OP_INV = 2
OP_POW = 3
OP_COMM = 4

BACKEND_NAME = "pure-python"


def evaluate_program(program, images, rows, inverse, identity):
    """Run one postfix program; returns the resulting element index."""
    stack = []
    push = stack.append
    pop = stack.pop
    i = 0
    n = len(program)
    while i < n:
        op = program[i]
        arg = program[i + 1]
        i += 2
        if op == OP_GEN:
            push(images[arg])
        elif op == OP_MUL:
            b = pop()
            a = pop()
            push(rows[a][b])
        elif op == OP_INV:
            push(inverse[pop()])
        elif op == OP_POW:
            e = arg
            a = pop()
            if e < 0:
                a = inverse[a]
                e = -e
            acc = identity
            while e:
                if e & 1:
                    acc = rows[acc][a]
                a = rows[a][a]
                e >>= 1
            push(acc)
        elif op == OP_COMM:
            b = pop()
            a = pop()
            push(rows[rows[inverse[a]][inverse[b]]][rows[a][b]])
        else:
            raise ValueError(f"bad opcode {op}")
    return pop()


def _generates(rows, order, identity, images):
    seen = bytearray(order)
    seen[identity] = 1
    count = 1
    stack = [identity]
    pop = stack.pop
    push = stack.append
    while stack:
        row = rows[pop()]
        for g in images:
            y = row[g]
            if not seen[y]:
                seen[y] = 1
                count += 1
                push(y)
    return count == order


def scan_assignments(rows, inverse, identity, order, cand_lists, programs,
                     check_generation, find_first):
    """Enumerate candidate tuples; returns (hits, first_witness, scanned).

    ``scanned`` counts every enumerated tuple, hit or not, so callers can
    account search effort against their budget.
    """
    k = len(cand_lists)
    if k == 0:
        ok = all(evaluate_program(p, (), rows, inverse, identity) == identity
                 for p in programs)
        ok = ok and (not check_generation or order == 1)
        return (1, (), 1) if ok else (0, None, 1)
    if any(len(c) == 0 for c in cand_lists):
        return (0, None, 0)

    idx = [0] * k
    images = [c[0] for c in cand_lists]
    hits = 0
    witness = None
    scanned = 0
    while True:
        scanned += 1
        ok = True
        for program in programs:
            if evaluate_program(program, images, rows, inverse, identity) != identity:
                ok = False
                break
        if ok and check_generation:
            ok = _generates(rows, order, identity, images)
        if ok:
            hits += 1
            if witness is None:
                witness = tuple(images)
            if find_first:
                return (hits, witness, scanned)
        # odometer increment, last position fastest
        pos = k - 1
        while pos >= 0:
            idx[pos] += 1
            if idx[pos] < len(cand_lists[pos]):
                images[pos] = cand_lists[pos][idx[pos]]
                break
            idx[pos] = 0
            images[pos] = cand_lists[pos][0]
            pos -= 1
        if pos < 0:
            return (hits, witness, scanned)
