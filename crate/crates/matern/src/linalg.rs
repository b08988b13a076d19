//! Dense blocked Cholesky on row-major storage, with GEMM updates delegated
//! to `matrixmultiply`.

use num_complex::Complex64;

const BLOCK: usize = 256;

pub(crate) trait Scalar:
    Copy + Default + std::ops::Add<Output = Self> + std::ops::Sub<Output = Self> + std::ops::Mul<Output = Self>
{
    fn conj(self) -> Self;
    fn re(self) -> f64;
    fn scale(self, s: f64) -> Self;
    fn norm_sqr(self) -> f64;
    fn from_re(x: f64) -> Self;

    /// C ← C − A·B for raw strided operands.
    ///
    /// # Safety
    /// Pointers and strides must describe valid, non-overlapping regions
    /// (C may alias neither A nor B).
    #[allow(clippy::too_many_arguments)]
    unsafe fn gemm_sub(
        m: usize,
        k: usize,
        n: usize,
        a: *const Self,
        rsa: isize,
        csa: isize,
        b: *const Self,
        rsb: isize,
        csb: isize,
        c: *mut Self,
        rsc: isize,
        csc: isize,
    );
}

impl Scalar for f64 {
    fn conj(self) -> Self {
        self
    }
    fn re(self) -> f64 {
        self
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn norm_sqr(self) -> f64 {
        self * self
    }
    fn from_re(x: f64) -> Self {
        x
    }
    unsafe fn gemm_sub(
        m: usize,
        k: usize,
        n: usize,
        a: *const Self,
        rsa: isize,
        csa: isize,
        b: *const Self,
        rsb: isize,
        csb: isize,
        c: *mut Self,
        rsc: isize,
        csc: isize,
    ) {
        matrixmultiply::dgemm(m, k, n, -1.0, a, rsa, csa, b, rsb, csb, 1.0, c, rsc, csc);
    }
}

impl Scalar for Complex64 {
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    fn re(self) -> f64 {
        self.re
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn norm_sqr(self) -> f64 {
        Complex64::norm_sqr(&self)
    }
    fn from_re(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    unsafe fn gemm_sub(
        m: usize,
        k: usize,
        n: usize,
        a: *const Self,
        rsa: isize,
        csa: isize,
        b: *const Self,
        rsb: isize,
        csb: isize,
        c: *mut Self,
        rsc: isize,
        csc: isize,
    ) {
        use matrixmultiply::CGemmOption::Standard;
        // Complex64 is layout-compatible with [f64; 2].
        matrixmultiply::zgemm(
            Standard,
            Standard,
            m,
            k,
            n,
            [-1.0, 0.0],
            a as *const [f64; 2],
            rsa,
            csa,
            b as *const [f64; 2],
            rsb,
            csb,
            [1.0, 0.0],
            c as *mut [f64; 2],
            rsc,
            csc,
        );
    }
}

/// Overwrites the lower triangle of the Hermitian row-major `a` (n×n) with
/// its Cholesky factor L (A = L Lᴴ) and zeroes the strict upper triangle.
///
/// On failure returns the pivot index and the offending pivot value.
pub(crate) fn cholesky_in_place<T: Scalar>(a: &mut [T], n: usize) -> Result<(), (usize, f64)> {
    assert_eq!(a.len(), n * n);
    let mut panel_conj: Vec<T> = Vec::new();
    let mut k0 = 0;
    while k0 < n {
        let k1 = (k0 + BLOCK).min(n);
        let kb = k1 - k0;

        // Diagonal block.
        for j in k0..k1 {
            let mut d = a[j * n + j].re();
            for l in k0..j {
                d -= a[j * n + l].norm_sqr();
            }
            if !(d > 0.0) || !d.is_finite() {
                return Err((j, d));
            }
            let ljj = d.sqrt();
            a[j * n + j] = T::from_re(ljj);
            let inv = 1.0 / ljj;
            for i in j + 1..k1 {
                let mut s = a[i * n + j];
                for l in k0..j {
                    s = s - a[i * n + l] * a[j * n + l].conj();
                }
                a[i * n + j] = s.scale(inv);
            }
        }

        // Panel below the diagonal block: X Lkkᴴ = A.
        if k1 < n {
            let ptr = a.as_mut_ptr();
            // SAFETY: the panel (rows ≥ k1) and the diagonal block (rows < k1)
            // are disjoint row ranges of the same buffer.
            unsafe {
                trsm_panel(ptr.add(k1 * n + k0), n - k1, ptr.add(k0 * n + k0), kb, n);
            }
        }

        // Trailing lower-triangular update, one column block at a time.
        if k1 < n {
            let rows = n - k1;
            panel_conj.clear();
            panel_conj.reserve(rows * kb);
            for i in k1..n {
                for j in k0..k1 {
                    panel_conj.push(a[i * n + j].conj());
                }
            }
            let ptr = a.as_mut_ptr();
            let mut j0 = k1;
            while j0 < n {
                let j1 = (j0 + BLOCK).min(n);
                let m = n - j0;
                // SAFETY: A reads columns k0..k1, C writes columns ≥ k1 of the
                // same buffer; B reads the separate conjugated copy.
                unsafe {
                    T::gemm_sub(
                        m,
                        kb,
                        j1 - j0,
                        ptr.add(j0 * n + k0),
                        n as isize,
                        1,
                        panel_conj.as_ptr().add((j0 - k1) * kb),
                        1,
                        kb as isize,
                        ptr.add(j0 * n + j0),
                        n as isize,
                        1,
                    );
                }
                j0 = j1;
            }
        }
        k0 = k1;
    }
    for i in 0..n {
        for j in i + 1..n {
            a[i * n + j] = T::default();
        }
    }
    Ok(())
}

const TRSM_LEAF: usize = 16;

/// Solves X Lᴴ = B in place (B: rows×w at `b`, L: w×w lower at `l`, both
/// with row stride `ld`), splitting the columns recursively so that most of
/// the work is GEMM.
unsafe fn trsm_panel<T: Scalar>(b: *mut T, rows: usize, l: *const T, w: usize, ld: usize) {
    if w <= TRSM_LEAF {
        for i in 0..rows {
            let row = b.add(i * ld);
            for j in 0..w {
                let lj = l.add(j * ld);
                let mut s = *row.add(j);
                for k in 0..j {
                    s = s - *row.add(k) * (*lj.add(k)).conj();
                }
                *row.add(j) = s.scale(1.0 / (*lj.add(j)).re());
            }
        }
        return;
    }
    let h1 = w / 2;
    let h2 = w - h1;
    trsm_panel(b, rows, l, h1, ld);
    // B2 ← B2 − X1 L21ᴴ with L21ᴴ held as a conjugated copy.
    let mut l21h = Vec::with_capacity(h1 * h2);
    for c in 0..h1 {
        for r in 0..h2 {
            l21h.push((*l.add((h1 + r) * ld + c)).conj());
        }
    }
    T::gemm_sub(
        rows,
        h1,
        h2,
        b,
        ld as isize,
        1,
        l21h.as_ptr(),
        h2 as isize,
        1,
        b.add(h1),
        ld as isize,
        1,
    );
    trsm_panel(b.add(h1), rows, l.add(h1 * ld + h1), h2, ld);
}

/// Product of a lower-triangular real factor (row-major n×n) with a complex
/// right-hand side stored row-major n×cols.
pub(crate) fn real_lower_times_complex(l: &[f64], n: usize, w: &[Complex64], cols: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::default(); n * cols];
    // A complex n×cols row-major array is a real n×(2cols) row-major array.
    unsafe {
        matrixmultiply::dgemm(
            n,
            n,
            2 * cols,
            1.0,
            l.as_ptr(),
            n as isize,
            1,
            w.as_ptr() as *const f64,
            2 * cols as isize,
            1,
            0.0,
            out.as_mut_ptr() as *mut f64,
            2 * cols as isize,
            1,
        );
    }
    out
}

/// Product of a lower-triangular complex factor with a complex right-hand side.
pub(crate) fn complex_lower_times_complex(l: &[Complex64], n: usize, w: &[Complex64], cols: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::default(); n * cols];
    unsafe {
        matrixmultiply::zgemm(
            matrixmultiply::CGemmOption::Standard,
            matrixmultiply::CGemmOption::Standard,
            n,
            n,
            cols,
            [1.0, 0.0],
            l.as_ptr() as *const [f64; 2],
            n as isize,
            1,
            w.as_ptr() as *const [f64; 2],
            cols as isize,
            1,
            [0.0, 0.0],
            out.as_mut_ptr() as *mut [f64; 2],
            cols as isize,
            1,
        );
    }
    out
}
