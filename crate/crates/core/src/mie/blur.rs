//! Luminance conversion and separable smoothing with replicated borders.

use crate::frame::{ColorFrame, Plane};

/// Row of Pascal's triangle of length `size`; sums to `2^(size-1)`.
pub fn binomial_weights(size: usize) -> Vec<u64> {
    let mut row = vec![1u64];
    for _ in 1..size {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(1);
        for w in row.windows(2) {
            next.push(w[0] + w[1]);
        }
        next.push(1);
        row = next;
    }
    row
}

/// Sampled Gaussian of odd length `size`, normalized to unit sum.
pub fn gaussian_weights(size: usize, sigma: f64) -> Vec<f64> {
    let r = (size / 2) as f64;
    let raw: Vec<f64> = (0..size)
        .map(|i| {
            let x = i as f64 - r;
            (-(x * x) / (2.0 * sigma * sigma)).exp()
        })
        .collect();
    let sum: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / sum).collect()
}

#[inline]
fn round_half_up(v: f64) -> u8 {
    (v + 0.5).floor().clamp(0.0, 255.0) as u8
}

/// Weighted luminance, rounded half-up.
pub fn luminance(frame: &ColorFrame, weights: [f64; 3]) -> Plane {
    let lut = |w: f64| -> [f64; 256] {
        let mut t = [0.0; 256];
        for (v, slot) in t.iter_mut().enumerate() {
            *slot = w * v as f64;
        }
        t
    };
    let (lr, lg, lb) = (lut(weights[0]), lut(weights[1]), lut(weights[2]));
    let samples = frame
        .red()
        .samples()
        .iter()
        .zip(frame.green().samples())
        .zip(frame.blue().samples())
        .map(|((&r, &g), &b)| round_half_up(lr[r as usize] + lg[g as usize] + lb[b as usize]))
        .collect();
    Plane::new(frame.width(), frame.height(), samples).expect("dimensions preserved")
}

/// Copies `row` into `buf` with `radius` replicated samples on each side.
fn pad_row(row: &[u8], radius: usize, buf: &mut Vec<u8>) {
    buf.clear();
    let (first, last) = (row[0], row[row.len() - 1]);
    buf.extend(std::iter::repeat_n(first, radius));
    buf.extend_from_slice(row);
    buf.extend(std::iter::repeat_n(last, radius));
}

/// Exact 2-D binomial smoothing: integer convolution with the outer product
/// kernel and a single round-half-up division at the end.
pub fn binomial_blur(src: &Plane, size: usize) -> Plane {
    let (w, h) = (src.width(), src.height());
    let k = binomial_weights(size);
    let radius = size / 2;
    let shift = 2 * (size as u32 - 1);
    let half = 1u64 << (shift - 1);

    let mut horiz = vec![0u64; w * h];
    let mut padded = Vec::with_capacity(w + 2 * radius);
    for y in 0..h {
        pad_row(src.row(y), radius, &mut padded);
        let out = &mut horiz[y * w..(y + 1) * w];
        for (x, o) in out.iter_mut().enumerate() {
            *o = padded[x..x + size]
                .iter()
                .zip(&k)
                .map(|(&v, &kw)| v as u64 * kw)
                .sum();
        }
    }

    let mut out = vec![0u8; w * h];
    let mut acc = vec![0u64; w];
    for y in 0..h {
        acc.iter_mut().for_each(|a| *a = 0);
        for (i, &kw) in k.iter().enumerate() {
            let sy = (y + i).saturating_sub(radius).min(h - 1);
            let row = &horiz[sy * w..(sy + 1) * w];
            for (a, &v) in acc.iter_mut().zip(row) {
                *a += v * kw;
            }
        }
        for (o, &a) in out[y * w..(y + 1) * w].iter_mut().zip(&acc) {
            *o = ((a + half) >> shift).min(255) as u8;
        }
    }
    Plane::new(w, h, out).expect("dimensions preserved")
}

/// Separable floating-point smoothing with replicated borders.
pub fn gaussian_blur(src: &Plane, size: usize, sigma: f64) -> Plane {
    let (w, h) = (src.width(), src.height());
    let k = gaussian_weights(size, sigma);
    let radius = size / 2;

    let mut horiz = vec![0f64; w * h];
    let mut padded = Vec::with_capacity(w + 2 * radius);
    for y in 0..h {
        pad_row(src.row(y), radius, &mut padded);
        let out = &mut horiz[y * w..(y + 1) * w];
        for (x, o) in out.iter_mut().enumerate() {
            *o = padded[x..x + size]
                .iter()
                .zip(&k)
                .map(|(&v, &kw)| v as f64 * kw)
                .sum();
        }
    }

    let mut out = vec![0u8; w * h];
    let mut acc = vec![0f64; w];
    for y in 0..h {
        acc.iter_mut().for_each(|a| *a = 0.0);
        for (i, &kw) in k.iter().enumerate() {
            let sy = (y + i).saturating_sub(radius).min(h - 1);
            for (a, &v) in acc.iter_mut().zip(&horiz[sy * w..(sy + 1) * w]) {
                *a += v * kw;
            }
        }
        for (o, &a) in out[y * w..(y + 1) * w].iter_mut().zip(&acc) {
            *o = round_half_up(a);
        }
    }
    Plane::new(w, h, out).expect("dimensions preserved")
}
