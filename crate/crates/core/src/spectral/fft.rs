//! Thin wrapper over rustfft: plan caching and in-place 2D transforms.

use ndarray::Array2;
use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};
use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

thread_local! {
    static PLANS: RefCell<HashMap<(usize, bool), Arc<dyn Fft<f64>>>> =
        RefCell::new(HashMap::new());
    static SCRATCH: RefCell<Vec<Complex64>> = const { RefCell::new(Vec::new()) };
}

fn with_plan<R>(n: usize, inverse: bool, f: impl FnOnce(&dyn Fft<f64>, &mut [Complex64]) -> R) -> R {
    let plan = PLANS.with(|cell| {
        cell.borrow_mut()
            .entry((n, inverse))
            .or_insert_with(|| {
                FftPlanner::new().plan_fft(
                    n,
                    if inverse { FftDirection::Inverse } else { FftDirection::Forward },
                )
            })
            .clone()
    });
    SCRATCH.with(|cell| {
        let mut scratch = cell.borrow_mut();
        let need = plan.get_inplace_scratch_len();
        if scratch.len() < need {
            scratch.resize(need, Complex64::default());
        }
        f(plan.as_ref(), &mut scratch[..])
    })
}

/// Unnormalized 2D DFT in place, rows then columns. `inverse` selects the
/// e^{+i k x} convention; neither direction applies a 1/n^2 factor.
pub fn fft2_inplace(data: &mut Array2<Complex64>, inverse: bool) {
    let n = data.nrows();
    assert_eq!(n, data.ncols(), "square grids only");
    with_plan(n, inverse, |plan, scratch| {
        for mut row in data.rows_mut() {
            let slice = row.as_slice_mut().expect("standard layout");
            plan.process_with_scratch(slice, scratch);
        }
        let mut col = vec![Complex64::default(); n];
        for j in 0..n {
            for i in 0..n {
                col[i] = data[[i, j]];
            }
            plan.process_with_scratch(&mut col, scratch);
            for i in 0..n {
                data[[i, j]] = col[i];
            }
        }
    });
}
