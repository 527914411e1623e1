# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Smith normal form kernel, compiled twin of _snf_py.

Identical pivot and reduction rules over int64.  Every multiplication
and addition is overflow-checked; on overflow the kernel raises
OverflowError and the caller reruns the pure-Python kernel, so results
are bit-identical across backends whenever this one succeeds.
"""

from libc.stdlib cimport free, malloc

cdef extern from *:
    bint __builtin_add_overflow(long long, long long, long long*)
    bint __builtin_mul_overflow(long long, long long, long long*)

DEF LIMIT = 4611686018427387904  # 2**62


cdef inline long long _floordiv(long long a, long long b) noexcept nogil:
    cdef long long q = a / b
    if a % b != 0 and ((a < 0) != (b < 0)):
        q -= 1
    return q


cdef inline long long _cmul(long long a, long long b) except? -9223372036854775807:
    cdef long long p
    if __builtin_mul_overflow(a, b, &p) or p > LIMIT or p < -LIMIT:
        raise OverflowError
    return p


cdef inline long long _cadd(long long a, long long b) except? -9223372036854775807:
    cdef long long s
    if __builtin_add_overflow(a, b, &s) or s > LIMIT or s < -LIMIT:
        raise OverflowError
    return s


cdef class _Mat:
    cdef long long* d
    cdef Py_ssize_t rows, cols

    def __cinit__(self, Py_ssize_t rows, Py_ssize_t cols):
        cdef Py_ssize_t size = rows * cols
        self.rows = rows
        self.cols = cols
        self.d = <long long*> malloc((size if size else 1) * sizeof(long long))
        if self.d == NULL:
            raise MemoryError

    def __dealloc__(self):
        if self.d != NULL:
            free(self.d)

    cdef inline long long* row(self, Py_ssize_t i) noexcept nogil:
        return self.d + i * self.cols


cdef _Mat _identity(Py_ssize_t k):
    cdef _Mat m = _Mat(k, k)
    cdef Py_ssize_t i, j
    for i in range(k):
        for j in range(k):
            m.row(i)[j] = 1 if i == j else 0
    return m


cdef list _to_list(_Mat m):
    cdef Py_ssize_t i, j
    out = []
    for i in range(m.rows):
        out.append([m.row(i)[j] for j in range(m.cols)])
    return out


cdef int _xgcd(long long aa, long long bb, long long* g, long long* x, long long* y) except -1:
    cdef long long xx = 1, nx = 0, yy = 0, ny = 1, gg = aa, ng = bb, q, tmp
    while ng != 0:
        q = _floordiv(gg, ng)
        tmp = xx - _cmul(q, nx); xx = nx; nx = tmp
        tmp = yy - _cmul(q, ny); yy = ny; ny = tmp
        tmp = gg - _cmul(q, ng); gg = ng; ng = tmp
    if gg < 0:
        gg = -gg; xx = -xx; yy = -yy
    g[0] = gg; x[0] = xx; y[0] = yy
    return 0


cdef int _swap_rows(_Mat a, _Mat u, _Mat uinv, Py_ssize_t i, Py_ssize_t j) except -1:
    cdef Py_ssize_t c
    cdef long long tmp
    for c in range(a.cols):
        tmp = a.row(i)[c]; a.row(i)[c] = a.row(j)[c]; a.row(j)[c] = tmp
    for c in range(u.cols):
        tmp = u.row(i)[c]; u.row(i)[c] = u.row(j)[c]; u.row(j)[c] = tmp
    for c in range(uinv.rows):
        tmp = uinv.row(c)[i]; uinv.row(c)[i] = uinv.row(c)[j]; uinv.row(c)[j] = tmp
    return 0


cdef int _swap_cols(_Mat a, _Mat v, _Mat vinv, Py_ssize_t i, Py_ssize_t j) except -1:
    cdef Py_ssize_t c
    cdef long long tmp
    for c in range(a.rows):
        tmp = a.row(c)[i]; a.row(c)[i] = a.row(c)[j]; a.row(c)[j] = tmp
    for c in range(v.rows):
        tmp = v.row(c)[i]; v.row(c)[i] = v.row(c)[j]; v.row(c)[j] = tmp
    for c in range(vinv.cols):
        tmp = vinv.row(i)[c]; vinv.row(i)[c] = vinv.row(j)[c]; vinv.row(j)[c] = tmp
    return 0


cdef int _row_add(_Mat a, _Mat u, _Mat uinv, Py_ssize_t i, Py_ssize_t j, long long k) except -1:
    # row_i += k * row_j on a and u; inverse column op on uinv
    cdef Py_ssize_t c
    for c in range(a.cols):
        a.row(i)[c] = _cadd(a.row(i)[c], _cmul(k, a.row(j)[c]))
    for c in range(u.cols):
        u.row(i)[c] = _cadd(u.row(i)[c], _cmul(k, u.row(j)[c]))
    for c in range(uinv.rows):
        uinv.row(c)[j] = _cadd(uinv.row(c)[j], -_cmul(k, uinv.row(c)[i]))
    return 0


cdef int _col_add(_Mat a, _Mat v, _Mat vinv, Py_ssize_t i, Py_ssize_t j, long long k) except -1:
    # col_i += k * col_j on a and v; inverse row op on vinv
    cdef Py_ssize_t c
    for c in range(a.rows):
        a.row(c)[i] = _cadd(a.row(c)[i], _cmul(k, a.row(c)[j]))
    for c in range(v.rows):
        v.row(c)[i] = _cadd(v.row(c)[i], _cmul(k, v.row(c)[j]))
    for c in range(vinv.cols):
        vinv.row(j)[c] = _cadd(vinv.row(j)[c], -_cmul(k, vinv.row(i)[c]))
    return 0


cdef int _row_combine(_Mat a, _Mat u, _Mat uinv, Py_ssize_t i, Py_ssize_t j,
                      long long c11, long long c12, long long c21, long long c22) except -1:
    cdef Py_ssize_t c
    cdef long long x, y
    for c in range(a.cols):
        x = a.row(i)[c]; y = a.row(j)[c]
        a.row(i)[c] = _cadd(_cmul(c11, x), _cmul(c12, y))
        a.row(j)[c] = _cadd(_cmul(c21, x), _cmul(c22, y))
    for c in range(u.cols):
        x = u.row(i)[c]; y = u.row(j)[c]
        u.row(i)[c] = _cadd(_cmul(c11, x), _cmul(c12, y))
        u.row(j)[c] = _cadd(_cmul(c21, x), _cmul(c22, y))
    for c in range(uinv.rows):
        x = uinv.row(c)[i]; y = uinv.row(c)[j]
        uinv.row(c)[i] = _cadd(_cmul(c22, x), -_cmul(c21, y))
        uinv.row(c)[j] = _cadd(-_cmul(c12, x), _cmul(c11, y))
    return 0


cdef int _col_combine(_Mat a, _Mat v, _Mat vinv, Py_ssize_t i, Py_ssize_t j,
                      long long c11, long long c12, long long c21, long long c22) except -1:
    cdef Py_ssize_t c
    cdef long long x, y
    for c in range(a.rows):
        x = a.row(c)[i]; y = a.row(c)[j]
        a.row(c)[i] = _cadd(_cmul(c11, x), _cmul(c12, y))
        a.row(c)[j] = _cadd(_cmul(c21, x), _cmul(c22, y))
    for c in range(v.rows):
        x = v.row(c)[i]; y = v.row(c)[j]
        v.row(c)[i] = _cadd(_cmul(c11, x), _cmul(c12, y))
        v.row(c)[j] = _cadd(_cmul(c21, x), _cmul(c22, y))
    for c in range(vinv.cols):
        x = vinv.row(i)[c]; y = vinv.row(j)[c]
        vinv.row(i)[c] = _cadd(_cmul(c22, x), -_cmul(c21, y))
        vinv.row(j)[c] = _cadd(-_cmul(c12, x), _cmul(c11, y))
    return 0


def snf_with_transforms(mat):
    """int64 twin of _snf_py.snf_with_transforms; raises OverflowError."""
    cdef Py_ssize_t m = len(mat)
    cdef Py_ssize_t n = len(mat[0]) if m else 0
    cdef _Mat a = _Mat(m, n)
    cdef _Mat u = _identity(m)
    cdef _Mat uinv = _identity(m)
    cdef _Mat v = _identity(n)
    cdef _Mat vinv = _identity(n)
    cdef Py_ssize_t i, j, t, pi, pj, bi, bj
    cdef long long x, w, p, best, g, gx, gy
    cdef bint found, clean

    for i in range(m):
        row = mat[i]
        for j in range(n):
            val = row[j]
            if val > LIMIT or val < -LIMIT:
                raise OverflowError
            a.row(i)[j] = val

    t = 0
    while t < m and t < n:
        found = False
        best = 0
        pi = pj = -1
        for i in range(t, m):
            for j in range(t, n):
                x = a.row(i)[j]
                if x == 0:
                    continue
                if x < 0:
                    x = -x
                if not found or x < best:
                    found = True
                    best = x
                    pi = i
                    pj = j
                if best == 1:
                    break
            if found and best == 1:
                break
        if not found:
            break
        if pi != t:
            _swap_rows(a, u, uinv, t, pi)
        if pj != t:
            _swap_cols(a, v, vinv, t, pj)

        while True:
            for i in range(t + 1, m):
                w = a.row(i)[t]
                if w == 0:
                    continue
                p = a.row(t)[t]
                if w % p == 0:
                    _row_add(a, u, uinv, i, t, -_floordiv(w, p))
                else:
                    _xgcd(p, w, &g, &gx, &gy)
                    _row_combine(a, u, uinv, t, i, gx, gy, -_floordiv(w, g), _floordiv(p, g))
            clean = True
            for j in range(t + 1, n):
                w = a.row(t)[j]
                if w == 0:
                    continue
                p = a.row(t)[t]
                if w % p == 0:
                    _col_add(a, v, vinv, j, t, -_floordiv(w, p))
                else:
                    _xgcd(p, w, &g, &gx, &gy)
                    _col_combine(a, v, vinv, t, j, gx, gy, -_floordiv(w, g), _floordiv(p, g))
                    clean = False
            if not clean:
                continue
            found = False
            for i in range(t + 1, m):
                if a.row(i)[t] != 0:
                    found = True
                    break
            if found:
                continue
            found = False
            p = a.row(t)[t]
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if a.row(i)[j] % p != 0:
                        found = True
                        bi = i
                        bj = j
                        break
                if found:
                    break
            if not found:
                break
            _row_add(a, u, uinv, t, bi, 1)

        if a.row(t)[t] < 0:
            for j in range(n):
                a.row(t)[j] = -a.row(t)[j]
            for j in range(m):
                u.row(t)[j] = -u.row(t)[j]
            for i in range(m):
                uinv.row(i)[t] = -uinv.row(i)[t]
        t += 1

    return _to_list(u), _to_list(a), _to_list(v), _to_list(uinv), _to_list(vinv)
