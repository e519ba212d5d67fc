use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

/// Unnormalized 3D transform on an `n^3` array in `(i, j, k)` row-major order.
pub struct Fft3 {
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

static PLANS: OnceLock<Mutex<HashMap<usize, Arc<Fft3>>>> = OnceLock::new();

impl Fft3 {
    pub fn shared(n: usize) -> Arc<Fft3> {
        let cache = PLANS.get_or_init(|| Mutex::new(HashMap::new()));
        let mut map = cache.lock().expect("fft plan cache poisoned");
        map.entry(n)
            .or_insert_with(|| {
                let mut planner = FftPlanner::new();
                Arc::new(Fft3 {
                    n,
                    fwd: planner.plan_fft_forward(n),
                    inv: planner.plan_fft_inverse(n),
                })
            })
            .clone()
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        self.transform(data, &self.fwd);
    }

    pub fn inverse(&self, data: &mut [Complex64]) {
        self.transform(data, &self.inv);
    }

    fn transform(&self, data: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
        let n = self.n;
        let nn = n * n;
        assert_eq!(data.len(), nn * n);

        // k and j axes live inside each i-plane.
        data.par_chunks_mut(nn).for_each(|plane| {
            plan.process(plane);
            let mut t = vec![Complex64::new(0.0, 0.0); nn];
            transpose(plane, &mut t, n);
            plan.process(&mut t);
            transpose(&t, plane, n);
        });

        // i axis: gather one (k, i) slab per j, transform, scatter back.
        let slabs: Vec<Vec<Complex64>> = (0..n)
            .into_par_iter()
            .map(|j| {
                let mut s = vec![Complex64::new(0.0, 0.0); nn];
                for i in 0..n {
                    let row = &data[(i * n + j) * n..(i * n + j + 1) * n];
                    for (k, v) in row.iter().enumerate() {
                        s[k * n + i] = *v;
                    }
                }
                plan.process(&mut s);
                s
            })
            .collect();
        for (j, s) in slabs.iter().enumerate() {
            for i in 0..n {
                let row = &mut data[(i * n + j) * n..(i * n + j + 1) * n];
                for (k, v) in row.iter_mut().enumerate() {
                    *v = s[k * n + i];
                }
            }
        }
    }
}

fn transpose(src: &[Complex64], dst: &mut [Complex64], n: usize) {
    for r in 0..n {
        for c in 0..n {
            dst[c * n + r] = src[r * n + c];
        }
    }
}
