# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled scan kernel; see ``_kernels_py`` for the reference semantics."""

from libc.stdlib cimport free, malloc
from libc.string cimport memset

import numpy as np

OP_GEN = 0
OP_MUL = 1
OP_INV = 2
OP_POW = 3
OP_COMM = 4

BACKEND_NAME = "compiled"

DEF MAX_GENS = 16
DEF MAX_STACK = 64


cdef inline int _power(const int* table, int n, const int* inverse,
                       int identity, int a, long long e) nogil:
    cdef int acc = identity
    if e < 0:
        a = inverse[a]
        e = -e
    while e:
        if e & 1:
            acc = table[acc * n + a]
        a = table[a * n + a]
        e >>= 1
    return acc


cdef int _run_program(const int* code, int code_len, const int* table, int n,
                      const int* inverse, int identity, const int* images,
                      int* stack) nogil:
    cdef int sp = 0
    cdef int i = 0
    cdef int op, arg, a, b
    while i < code_len:
        op = code[i]
        arg = code[i + 1]
        i += 2
        if op == OP_GEN:
            stack[sp] = images[arg]
            sp += 1
        elif op == OP_MUL:
            sp -= 1
            b = stack[sp]
            a = stack[sp - 1]
            stack[sp - 1] = table[a * n + b]
        elif op == OP_INV:
            stack[sp - 1] = inverse[stack[sp - 1]]
        elif op == OP_POW:
            stack[sp - 1] = _power(table, n, inverse, identity, stack[sp - 1], arg)
        elif op == OP_COMM:
            sp -= 1
            b = stack[sp]
            a = stack[sp - 1]
            stack[sp - 1] = table[table[inverse[a] * n + inverse[b]] * n + table[a * n + b]]
        else:
            return -1
    return stack[sp - 1]


cdef bint _generates(const int* table, int n, int identity,
                     const int* images, int k, char* seen, int* stack) nogil:
    cdef int count = 1
    cdef int sp = 0
    cdef int x, y, j
    memset(seen, 0, n)
    seen[identity] = 1
    stack[sp] = identity
    sp += 1
    while sp:
        sp -= 1
        x = stack[sp]
        for j in range(k):
            y = table[x * n + images[j]]
            if not seen[y]:
                seen[y] = 1
                count += 1
                stack[sp] = y
                sp += 1
    return count == n


def evaluate_program(program, images, table, inverse, identity):
    """Python-visible single evaluation, for cross-checking the backends."""
    cdef int[::1] code = np.ascontiguousarray(program, dtype=np.intc)
    cdef int[:, ::1] t = table
    cdef int[::1] inv = inverse
    cdef int[::1] img = np.ascontiguousarray(images, dtype=np.intc) if len(images) else np.zeros(1, dtype=np.intc)
    cdef int stack[MAX_STACK]
    return _run_program(&code[0], code.shape[0], &t[0, 0], t.shape[0], &inv[0],
                        identity, &img[0], stack)


def scan_assignments(table, inverse, int identity, int order, cand_lists, programs,
                     bint check_generation, bint find_first):
    """Mirror of ``_kernels_py.scan_assignments`` over numpy int32 inputs."""
    cdef int[:, ::1] t = table
    cdef int[::1] inv = inverse
    cdef int n = t.shape[0]
    cdef int k = len(cand_lists)
    if k > MAX_GENS:
        raise ValueError(f"at most {MAX_GENS} generators supported")

    cdef list cand_arrays = [np.ascontiguousarray(c, dtype=np.intc) for c in cand_lists]
    cdef list prog_arrays = [np.ascontiguousarray(p, dtype=np.intc) for p in programs]

    cdef int nprog = len(prog_arrays)
    cdef const int** cand = <const int**> malloc(k * sizeof(int*)) if k else NULL
    cdef long long* cand_len = <long long*> malloc((k if k else 1) * sizeof(long long))
    cdef const int** progs = <const int**> malloc((nprog if nprog else 1) * sizeof(int*))
    cdef long long* prog_len = <long long*> malloc((nprog if nprog else 1) * sizeof(long long))
    cdef char* seen = <char*> malloc(n)
    cdef int* gstack = <int*> malloc(n * sizeof(int))
    cdef int stack[MAX_STACK]
    cdef int images[MAX_GENS]
    cdef long long idx[MAX_GENS]
    cdef int[::1] view

    cdef long long hits = 0, scanned = 0
    cdef object witness = None
    cdef int j, pos
    cdef bint ok
    cdef long long pi

    try:
        for j in range(k):
            view = cand_arrays[j]
            cand[j] = &view[0]
            cand_len[j] = view.shape[0]
            if cand_len[j] == 0:
                return (0, None, 0)
            idx[j] = 0
            images[j] = cand[j][0]
        for j in range(nprog):
            view = prog_arrays[j]
            progs[j] = &view[0] if view.shape[0] else NULL
            prog_len[j] = view.shape[0]

        if k == 0:
            ok = True
            for j in range(nprog):
                if _run_program(progs[j], <int> prog_len[j], &t[0, 0], n, &inv[0],
                                identity, images, stack) != identity:
                    ok = False
                    break
            if ok and check_generation and order != 1:
                ok = False
            return (1, (), 1) if ok else (0, None, 1)

        while True:
            scanned += 1
            ok = True
            for pi in range(nprog):
                if _run_program(progs[pi], <int> prog_len[pi], &t[0, 0], n, &inv[0],
                                identity, images, stack) != identity:
                    ok = False
                    break
            if ok and check_generation:
                ok = _generates(&t[0, 0], n, identity, images, k, seen, gstack)
            if ok:
                hits += 1
                if witness is None:
                    witness = tuple(images[j] for j in range(k))
                if find_first:
                    return (hits, witness, scanned)
            pos = k - 1
            while pos >= 0:
                idx[pos] += 1
                if idx[pos] < cand_len[pos]:
                    images[pos] = cand[pos][idx[pos]]
                    break
                idx[pos] = 0
                images[pos] = cand[pos][0]
                pos -= 1
            if pos < 0:
                return (hits, witness, scanned)
    finally:
        if cand != NULL:
            free(cand)
        free(cand_len)
        free(progs)
        free(prog_len)
        free(seen)
        free(gstack)
