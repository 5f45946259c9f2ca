//! Thin wrapper over rustfft with a per-thread plan cache.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::cell::RefCell;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Unnormalized forward DFT: X[k] = sum_n x[n] e^{-2 pi i k n / len}.
pub fn forward(buf: &mut [Complex64]) {
    if buf.len() <= 1 {
        return;
    }
    let plan = PLANNER.with(|p| p.borrow_mut().plan_fft_forward(buf.len()));
    plan.process(buf);
}

/// Unnormalized inverse DFT: x[n] = sum_k X[k] e^{+2 pi i k n / len}.
pub fn inverse(buf: &mut [Complex64]) {
    if buf.len() <= 1 {
        return;
    }
    let plan = PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(buf.len()));
    plan.process(buf);
}

/// Row-major 2-D transform. `inv_rows` selects the direction along each row
/// (second index), `inv_cols` along each column.
pub fn transform_2d(buf: &mut [Complex64], rows: usize, cols: usize, inv_rows: bool, inv_cols: bool) {
    assert_eq!(buf.len(), rows * cols);
    for r in buf.chunks_mut(cols) {
        if inv_rows {
            inverse(r)
        } else {
            forward(r)
        }
    }
    let mut col = vec![Complex64::new(0.0, 0.0); rows];
    for c in 0..cols {
        for r in 0..rows {
            col[r] = buf[r * cols + c];
        }
        if inv_cols {
            inverse(&mut col)
        } else {
            forward(&mut col)
        }
        for r in 0..rows {
            buf[r * cols + c] = col[r];
        }
    }
}
