# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled beam explorer.

Operation-for-operation twin of ``extcomplex`` + ``_pykernel``: same
formulas, same evaluation order, same dedup lattice and tie-breaking, so both
backends produce bit-identical statistics.  Build with -ffp-contract=off.
"""
from libc.math cimport sqrt, exp, cos, sin, cosh, sinh, floor, log, INFINITY
from libc.stdlib cimport malloc, free

import numpy as np

from .extcomplex import ExtComplex, INF, finite
from .funcexpr import compile_postfix
from .kernel_common import RawExplore, stats_from_lists

name = "compiled"

cdef double TRIG_IM_LIMIT = 700.0
cdef double QUANT = 1e12

cdef enum:
    OP_VAR = 0
    OP_CONST = 1
    OP_ADD = 2
    OP_SUB = 3
    OP_MUL = 4
    OP_DIV = 5
    OP_POW = 6
    OP_EXP = 7
    OP_SIN = 8
    OP_COS = 9
    OP_NEG = 10

ctypedef struct XC:
    int inf
    double re
    double im


cdef inline XC mk(double re, double im, double cap) noexcept nogil:
    cdef XC r
    r.inf = 0
    r.re = re
    r.im = im
    if re != re or im != im or re > cap or re < -cap or im > cap or im < -cap:
        r.inf = 1
    elif sqrt(re * re + im * im) > cap:
        r.inf = 1
    return r


cdef inline XC infc() noexcept nogil:
    cdef XC r
    r.inf = 1
    r.re = 0.0
    r.im = 0.0
    return r


cdef inline double xabs(XC a) noexcept nogil:
    if a.inf:
        return INFINITY
    return sqrt(a.re * a.re + a.im * a.im)


cdef inline int is_zero(XC a) noexcept nogil:
    return a.inf == 0 and a.re == 0.0 and a.im == 0.0


cdef inline int x_add(XC a, XC b, double cap, XC* out) noexcept nogil:
    if a.inf:
        if b.inf:
            return 1
        out[0] = infc()
        return 0
    if b.inf:
        out[0] = infc()
        return 0
    out[0] = mk(a.re + b.re, a.im + b.im, cap)
    return 0


cdef inline XC x_neg(XC a) noexcept nogil:
    if a.inf:
        return infc()
    cdef XC r
    r.inf = 0
    r.re = -a.re
    r.im = -a.im
    return r


cdef inline int x_mul(XC a, XC b, double cap, XC* out) noexcept nogil:
    if a.inf or b.inf:
        if is_zero(a) or is_zero(b):
            return 1
        out[0] = infc()
        return 0
    out[0] = mk(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re, cap)
    return 0


cdef inline int x_div(XC a, XC b, double cap, XC* out) noexcept nogil:
    cdef double c, d, r, den
    if b.inf:
        if a.inf:
            return 1
        out[0] = mk(0.0, 0.0, cap)
        return 0
    if a.inf:
        out[0] = infc()
        return 0
    c = b.re
    d = b.im
    if c == 0.0 and d == 0.0:
        if a.re == 0.0 and a.im == 0.0:
            return 1
        out[0] = infc()
        return 0
    if (c if c >= 0 else -c) >= (d if d >= 0 else -d):
        r = d / c
        den = c + d * r
        out[0] = mk((a.re + a.im * r) / den, (a.im - a.re * r) / den, cap)
    else:
        r = c / d
        den = c * r + d
        out[0] = mk((a.re * r + a.im) / den, (a.im * r - a.re) / den, cap)
    return 0


cdef inline int x_exp(XC a, double cap, double logcap, XC* out) noexcept nogil:
    cdef double m
    if a.inf:
        return 1
    if a.re > logcap:
        out[0] = infc()
        return 0
    m = exp(a.re)
    out[0] = mk(m * cos(a.im), m * sin(a.im), cap)
    return 0


cdef inline int x_sin(XC a, double cap, XC* out) noexcept nogil:
    if a.inf:
        return 1
    if a.im > TRIG_IM_LIMIT or a.im < -TRIG_IM_LIMIT:
        out[0] = infc()
        return 0
    out[0] = mk(sin(a.re) * cosh(a.im), cos(a.re) * sinh(a.im), cap)
    return 0


cdef inline int x_cos(XC a, double cap, XC* out) noexcept nogil:
    if a.inf:
        return 1
    if a.im > TRIG_IM_LIMIT or a.im < -TRIG_IM_LIMIT:
        out[0] = infc()
        return 0
    out[0] = mk(cos(a.re) * cosh(a.im), -(sin(a.re) * sinh(a.im)), cap)
    return 0


cdef inline int x_pow(XC a, int k, double cap, XC* out) noexcept nogil:
    cdef int n, j
    cdef XC acc, one
    if k == 0:
        if a.inf:
            return 1
        out[0] = mk(1.0, 0.0, cap)
        return 0
    n = -k if k < 0 else k
    acc = a
    for j in range(n - 1):
        if x_mul(acc, a, cap, &acc):
            return 1
    if k < 0:
        one = mk(1.0, 0.0, cap)
        return x_div(one, acc, cap, out)
    out[0] = acc
    return 0


ctypedef struct Prog:
    int n
    int* ops
    int* args
    double* consts


cdef int run(Prog* p, XC z, XC* stack, double cap, double logcap, XC* out) noexcept nogil:
    cdef int sp = 0
    cdef int pc, op
    cdef XC a, b, r
    for pc in range(p.n):
        op = p.ops[pc]
        if op == OP_VAR:
            stack[sp] = z
            sp += 1
        elif op == OP_CONST:
            r.inf = 0
            r.re = p.consts[2 * p.args[pc]]
            r.im = p.consts[2 * p.args[pc] + 1]
            stack[sp] = r
            sp += 1
        elif op == OP_ADD or op == OP_SUB or op == OP_MUL or op == OP_DIV:
            b = stack[sp - 1]
            a = stack[sp - 2]
            sp -= 1
            if op == OP_ADD:
                if x_add(a, b, cap, &r):
                    return 1
            elif op == OP_SUB:
                if x_add(a, x_neg(b), cap, &r):
                    return 1
            elif op == OP_MUL:
                if x_mul(a, b, cap, &r):
                    return 1
            else:
                if x_div(a, b, cap, &r):
                    return 1
            stack[sp - 1] = r
        else:
            a = stack[sp - 1]
            if op == OP_POW:
                if x_pow(a, p.args[pc], cap, &r):
                    return 1
            elif op == OP_EXP:
                if x_exp(a, cap, logcap, &r):
                    return 1
            elif op == OP_SIN:
                if x_sin(a, cap, &r):
                    return 1
            elif op == OP_COS:
                if x_cos(a, cap, &r):
                    return 1
            else:
                r = x_neg(a)
            stack[sp - 1] = r
    out[0] = stack[0]
    return 0


cdef class Program:
    """Generators flattened into postfix programs (owned C buffers)."""

    cdef Prog* progs
    cdef int g
    cdef int max_stack
    cdef object _keep

    def __cinit__(self, generators):
        cdef int i, j, n
        self.g = len(generators)
        self.progs = <Prog*> malloc(self.g * sizeof(Prog))
        for i in range(self.g):
            self.progs[i].ops = NULL
            self.progs[i].args = NULL
            self.progs[i].consts = NULL
        self.max_stack = 1
        for i, gen in enumerate(generators):
            ops, args, consts, peak = compile_postfix(gen)
            n = len(ops)
            self.progs[i].n = n
            self.progs[i].ops = <int*> malloc(max(n, 1) * sizeof(int))
            self.progs[i].args = <int*> malloc(max(n, 1) * sizeof(int))
            self.progs[i].consts = <double*> malloc(max(len(consts), 1) * sizeof(double))
            for j in range(n):
                self.progs[i].ops[j] = ops[j]
                self.progs[i].args[j] = args[j]
            for j in range(len(consts)):
                self.progs[i].consts[j] = consts[j]
            if peak > self.max_stack:
                self.max_stack = peak
        self._keep = tuple(generators)

    def __dealloc__(self):
        cdef int i
        if self.progs != NULL:
            for i in range(self.g):
                free(self.progs[i].ops)
                free(self.progs[i].args)
                free(self.progs[i].consts)
            free(self.progs)

    def __reduce__(self):
        return (Program, (self._keep,))


def prepare(generators):
    return Program(tuple(generators))


ctypedef struct Params:
    double esc_r
    double bound_r
    int D
    int B
    int G
    double rho
    double cap
    double logcap
    int has_pole


ctypedef struct Work:
    # survivors
    XC* sv
    double* smod
    int* sstreak
    # children
    XC* cv
    double* cmod
    int* cstreak
    int* cpar
    int* cgen
    double* kre
    double* kim
    int* sidx
    int* tmp
    int* keep
    int* kept
    int* chosen
    XC* stack
    # outputs
    double* mins
    double* maxs
    int* escs
    int* survs
    int* minidx
    # word tables (D * 2B)
    int* tpar
    int* tgen
    int indet
    int streak_depth
    int wn
    int wp
    int wg


cdef int alloc_work(Work* w, int D, int B, int g, int max_stack) noexcept nogil:
    cdef int ns = 2 * B
    cdef int nc = ns * g
    w.sv = <XC*> malloc(ns * sizeof(XC))
    w.smod = <double*> malloc(ns * sizeof(double))
    w.sstreak = <int*> malloc(ns * sizeof(int))
    w.cv = <XC*> malloc(nc * sizeof(XC))
    w.cmod = <double*> malloc(nc * sizeof(double))
    w.cstreak = <int*> malloc(nc * sizeof(int))
    w.cpar = <int*> malloc(nc * sizeof(int))
    w.cgen = <int*> malloc(nc * sizeof(int))
    w.kre = <double*> malloc(nc * sizeof(double))
    w.kim = <double*> malloc(nc * sizeof(double))
    w.sidx = <int*> malloc(nc * sizeof(int))
    w.tmp = <int*> malloc(nc * sizeof(int))
    w.keep = <int*> malloc(nc * sizeof(int))
    w.kept = <int*> malloc(nc * sizeof(int))
    w.chosen = <int*> malloc(nc * sizeof(int))
    w.stack = <XC*> malloc((max_stack + 1) * sizeof(XC))
    w.mins = <double*> malloc(D * sizeof(double))
    w.maxs = <double*> malloc(D * sizeof(double))
    w.escs = <int*> malloc(D * sizeof(int))
    w.survs = <int*> malloc(D * sizeof(int))
    w.minidx = <int*> malloc(D * sizeof(int))
    w.tpar = <int*> malloc(D * ns * sizeof(int))
    w.tgen = <int*> malloc(D * ns * sizeof(int))
    return 0


cdef void free_work(Work* w) noexcept nogil:
    free(w.sv); free(w.smod); free(w.sstreak)
    free(w.cv); free(w.cmod); free(w.cstreak); free(w.cpar); free(w.cgen)
    free(w.kre); free(w.kim); free(w.sidx); free(w.tmp); free(w.keep)
    free(w.kept); free(w.chosen); free(w.stack)
    free(w.mins); free(w.maxs); free(w.escs); free(w.survs); free(w.minidx)
    free(w.tpar); free(w.tgen)


# ---- stable merge sorts over index arrays

cdef inline int key_less(Work* w, int a, int b) noexcept nogil:
    # (is_inf, qre, qim) lexicographic
    cdef int ia = w.cv[a].inf
    cdef int ib = w.cv[b].inf
    if ia != ib:
        return ia < ib
    if ia:
        return 0
    if w.kre[a] != w.kre[b]:
        return w.kre[a] < w.kre[b]
    return w.kim[a] < w.kim[b]


cdef void sort_by_key(Work* w, int* idx, int* tmp, int n) noexcept nogil:
    cdef int width = 1
    cdef int lo, mid, hi, i, j, k
    cdef int* src = idx
    cdef int* dst = tmp
    cdef int* t
    while width < n:
        lo = 0
        while lo < n:
            mid = lo + width if lo + width < n else n
            hi = lo + 2 * width if lo + 2 * width < n else n
            i = lo
            j = mid
            k = lo
            while i < mid and j < hi:
                if key_less(w, src[j], src[i]):
                    dst[k] = src[j]
                    j += 1
                else:
                    dst[k] = src[i]
                    i += 1
                k += 1
            while i < mid:
                dst[k] = src[i]
                i += 1
                k += 1
            while j < hi:
                dst[k] = src[j]
                j += 1
                k += 1
            lo += 2 * width
        t = src
        src = dst
        dst = t
        width *= 2
    if src != idx:
        for i in range(n):
            idx[i] = src[i]


cdef void sort_by_mod(Work* w, int* idx, int* tmp, int n) noexcept nogil:
    cdef int width = 1
    cdef int lo, mid, hi, i, j, k
    cdef int* src = idx
    cdef int* dst = tmp
    cdef int* t
    while width < n:
        lo = 0
        while lo < n:
            mid = lo + width if lo + width < n else n
            hi = lo + 2 * width if lo + 2 * width < n else n
            i = lo
            j = mid
            k = lo
            while i < mid and j < hi:
                if w.cmod[src[j]] < w.cmod[src[i]]:
                    dst[k] = src[j]
                    j += 1
                else:
                    dst[k] = src[i]
                    i += 1
                k += 1
            while i < mid:
                dst[k] = src[i]
                i += 1
                k += 1
            while j < hi:
                dst[k] = src[j]
                j += 1
                k += 1
            lo += 2 * width
        t = src
        src = dst
        dst = t
        width *= 2
    if src != idx:
        for i in range(n):
            idx[i] = src[i]


cdef void explore_c(Prog* progs, int g, XC z, Params* P, Work* w, int want_words) noexcept nogil:
    cdef int D = P.D
    cdef int B = P.B
    cdef int ns = 2 * B
    cdef int nsurv = 1
    cdef int n, p, i, j, k, nc, nk, s, nchosen, taken, best
    cdef double mod, top
    cdef int esc
    cdef XC c
    w.sv[0] = z
    w.smod[0] = xabs(z)
    w.sstreak[0] = 0
    w.indet = 0
    w.streak_depth = -1
    w.wn = -1
    w.wp = -1
    w.wg = -1
    for n in range(1, D + 1):
        if nsurv == 0:
            w.mins[n - 1] = INFINITY
            w.maxs[n - 1] = 0.0
            w.escs[n - 1] = 0
            w.survs[n - 1] = 0
            w.minidx[n - 1] = -1
            continue
        nc = 0
        esc = 0
        top = 0.0
        for p in range(nsurv):
            for i in range(g):
                if run(&progs[i], w.sv[p], w.stack, P.cap, P.logcap, &c):
                    w.indet += 1
                    continue
                mod = xabs(c)
                if mod > top:
                    top = mod
                if c.inf:
                    esc += 1
                    if w.wn < 0:
                        w.wn = n
                        w.wp = p
                        w.wg = i
                    if not P.has_pole:
                        continue
                    s = 0
                else:
                    if mod > P.esc_r and mod > w.smod[p]:
                        s = w.sstreak[p] + 1
                    else:
                        s = 0
                    if s >= P.G:
                        if w.streak_depth < 0:
                            w.streak_depth = n
                        if w.wn < 0:
                            w.wn = n
                            w.wp = p
                            w.wg = i
                w.cv[nc] = c
                w.cmod[nc] = mod
                w.cstreak[nc] = s
                w.cpar[nc] = p
                w.cgen[nc] = i
                if c.inf:
                    w.kre[nc] = 0.0
                    w.kim[nc] = 0.0
                else:
                    w.kre[nc] = floor(c.re * QUANT + 0.5)
                    w.kim[nc] = floor(c.im * QUANT + 0.5)
                w.sidx[nc] = nc
                nc += 1
        # dedup: group equal lattice keys, first discovery wins, max streak
        sort_by_key(w, w.sidx, w.tmp, nc)
        for j in range(nc):
            w.keep[j] = 0
        j = 0
        while j < nc:
            k = j + 1
            s = w.cstreak[w.sidx[j]]
            while k < nc and not key_less(w, w.sidx[j], w.sidx[k]):
                if w.cstreak[w.sidx[k]] > s:
                    s = w.cstreak[w.sidx[k]]
                k += 1
            w.keep[w.sidx[j]] = 1
            w.cstreak[w.sidx[j]] = s
            j = k
        nk = 0
        for j in range(nc):
            if w.keep[j]:
                w.kept[nk] = j
                nk += 1
        # beam: B lowest + B highest finite, by (modulus, discovery order)
        for j in range(nk):
            w.sidx[j] = w.kept[j]
            w.chosen[w.kept[j]] = 0
        sort_by_mod(w, w.sidx, w.tmp, nk)
        for j in range(nk if nk < B else B):
            w.chosen[w.sidx[j]] = 1
        taken = 0
        j = nk - 1
        while j >= 0 and taken < B:
            if not w.cv[w.sidx[j]].inf:
                w.chosen[w.sidx[j]] = 1
                taken += 1
            j -= 1
        best = w.sidx[0] if nk > 0 else -1
        nchosen = 0
        w.minidx[n - 1] = -1
        for j in range(nk):
            k = w.kept[j]
            if w.chosen[k]:
                if k == best:
                    w.minidx[n - 1] = nchosen
                w.tpar[(n - 1) * ns + nchosen] = w.cpar[k]
                w.tgen[(n - 1) * ns + nchosen] = w.cgen[k]
                nchosen += 1
        # children buffers are separate from survivors, so copy is safe
        nchosen = 0
        for j in range(nk):
            k = w.kept[j]
            if w.chosen[k]:
                w.sv[nchosen] = w.cv[k]
                w.smod[nchosen] = w.cmod[k]
                w.sstreak[nchosen] = w.cstreak[k]
                nchosen += 1
        nsurv = nchosen
        w.maxs[n - 1] = top
        w.escs[n - 1] = esc
        w.survs[n - 1] = nsurv
        w.mins[n - 1] = w.cmod[best] if best >= 0 else INFINITY


cdef inline int escape_events_any(Work* w, int D) noexcept nogil:
    cdef int n
    for n in range(D):
        if w.escs[n] > 0:
            return 1
    return 0


cdef int decide_c(Work* w, Params* P) noexcept nogil:
    # mirror of orbit.decide; returns OrbitClass code
    cdef int D = P.D
    cdef int G = P.G if P.G < D else D
    cdef int hits = 0
    cdef int n, bounded = 0, escape = 0, extinct_escape, runaway
    cdef double top = 0.0
    for n in range(D):
        if w.mins[n] <= P.bound_r:
            hits += 1
        if w.escs[n] > 0:
            escape = 1
        if w.maxs[n] > top:
            top = w.maxs[n]
    if w.streak_depth >= 0:
        escape = 1
    if hits >= P.rho * D and w.survs[D - 1] > 0:
        n = D - 1
        while n >= D - G:
            if w.mins[n] <= P.bound_r:
                bounded = 1
                break
            n -= 1
    if escape and bounded:
        return 2
    if not bounded:
        if w.survs[D - 1] == 0 and escape_events_any(w, D):
            return 0
        if w.mins[D - 1] > P.esc_r:
            runaway = 1
            for n in range(D - G, D - 1):
                if not (w.mins[n] <= w.mins[n + 1]):
                    runaway = 0
                    break
            if runaway:
                return 0
    if not escape and top <= P.bound_r:
        return 1
    return 3


cdef void fill_params(Params* P, params, int has_pole):
    esc_r, bound_r, D, B, G, rho, cap = params
    P.esc_r = esc_r
    P.bound_r = bound_r
    P.D = D
    P.B = B
    P.G = G
    P.rho = rho
    P.cap = cap
    P.logcap = log(cap)
    P.has_pole = 1 if has_pole else 0


cdef XC to_xc(z, double cap):
    cdef XC r
    if z.is_inf:
        return infc()
    r.inf = 0
    r.re = z.re
    r.im = z.im
    return r


def explore(Program prog, has_pole, z, params, want_words):
    cdef Params P
    cdef Work w
    cdef int D, ns, n, j
    cdef XC start
    fill_params(&P, params, has_pole)
    start = to_xc(z, P.cap)
    D = P.D
    ns = 2 * P.B
    alloc_work(&w, D, P.B, prog.g, prog.max_stack)
    try:
        with nogil:
            explore_c(prog.progs, prog.g, start, &P, &w, 1)
        mins = [w.mins[n] for n in range(D)]
        maxs = [w.maxs[n] for n in range(D)]
        escs = [w.escs[n] for n in range(D)]
        survs = [w.survs[n] for n in range(D)]
        stats = stats_from_lists(mins, maxs, escs, survs, w.indet, w.streak_depth)
        if not want_words:
            return RawExplore(stats, None, None)
        tpar = [w.tpar[j] for j in range(D * ns)]
        tgen = [w.tgen[j] for j in range(D * ns)]
        minidx = [w.minidx[n] for n in range(D)]
        wn, wp, wg = w.wn, w.wp, w.wg
    finally:
        free_work(&w)

    def word_of(d, k):
        out = []
        while d >= 1:
            out.append(tgen[(d - 1) * ns + k])
            k = tpar[(d - 1) * ns + k]
            d -= 1
        return tuple(out)

    escape_word = None
    if wn > 0:
        escape_word = (wg,) + word_of(wn - 1, wp)
    min_words = [word_of(n + 1, minidx[n]) if minidx[n] >= 0 else None for n in range(D)]
    return RawExplore(stats, escape_word, min_words)


def classify_many(Program prog, has_pole, re, im, params):
    """Class codes for many finite starting points; releases the GIL."""
    cdef Params P
    cdef Work w
    cdef const double[::1] xr = np.ascontiguousarray(re, dtype=np.float64)
    cdef const double[::1] xi = np.ascontiguousarray(im, dtype=np.float64)
    cdef Py_ssize_t n = xr.shape[0]
    cdef Py_ssize_t k
    out = np.empty(n, dtype=np.int8)
    cdef signed char[::1] res = out
    fill_params(&P, params, has_pole)
    alloc_work(&w, P.D, P.B, prog.g, prog.max_stack)
    try:
        with nogil:
            for k in range(n):
                explore_c(prog.progs, prog.g, mk(xr[k], xi[k], P.cap), &P, &w, 0)
                res[k] = decide_c(&w, &P)
    finally:
        free_work(&w)
    return out
