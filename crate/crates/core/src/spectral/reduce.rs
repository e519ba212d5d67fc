//! Reductions whose result does not depend on the rayon thread count.
//!
//! The index range is cut into fixed chunks, each chunk is summed pairwise,
//! and the chunk partials are combined pairwise in index order.

use rayon::prelude::*;

const CHUNK: usize = 4096;

fn pairwise(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        1 => v[0],
        2 => v[0] + v[1],
        len if len <= 16 => {
            let mut s = 0.0;
            for x in v {
                s += x;
            }
            s
        }
        len => {
            let (a, b) = v.split_at(len / 2);
            pairwise(a) + pairwise(b)
        }
    }
}

pub fn det_sum<F>(len: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    let chunks = len.div_ceil(CHUNK);
    let partials: Vec<f64> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(len);
            let vals: Vec<f64> = (lo..hi).map(&f).collect();
            pairwise(&vals)
        })
        .collect();
    pairwise(&partials)
}

pub fn det_max<F>(len: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    (0..len)
        .into_par_iter()
        .with_min_len(CHUNK)
        .map(&f)
        .reduce(|| 0.0, f64::max)
}

pub fn slice_sum(v: &[f64]) -> f64 {
    det_sum(v.len(), |i| v[i])
}
