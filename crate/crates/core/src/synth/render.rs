use rand_chacha::ChaCha8Rng;

use super::unit;
use crate::frame::ColorFrame;

const SUBSAMPLES: usize = 4;

/// Alpha-blends a filled ellipse into an interleaved RGB canvas. Coverage
/// per pixel is estimated on a 4×4 subsample grid.
#[allow(clippy::too_many_arguments)]
pub(super) fn ellipse(canvas: &mut [f32], w: usize, h: usize, cx: f64, cy: f64, rx: f64, ry: f64, color: [u8; 3]) {
    let x0 = (cx - rx).floor().max(0.0) as usize;
    let y0 = (cy - ry).floor().max(0.0) as usize;
    let x1 = ((cx + rx).ceil().max(0.0) as usize).min(w);
    let y1 = ((cy + ry).ceil().max(0.0) as usize).min(h);
    let step = 1.0 / SUBSAMPLES as f64;
    for y in y0..y1 {
        for x in x0..x1 {
            let mut hits = 0;
            for j in 0..SUBSAMPLES {
                let py = (y as f64 + (j as f64 + 0.5) * step - cy) / ry;
                for i in 0..SUBSAMPLES {
                    let px = (x as f64 + (i as f64 + 0.5) * step - cx) / rx;
                    if px * px + py * py <= 1.0 {
                        hits += 1;
                    }
                }
            }
            if hits == 0 {
                continue;
            }
            let a = hits as f32 / (SUBSAMPLES * SUBSAMPLES) as f32;
            let px = &mut canvas[(y * w + x) * 3..][..3];
            for c in 0..3 {
                px[c] = px[c] * (1.0 - a) + f32::from(color[c]) * a;
            }
        }
    }
}

/// Rounds to 8 bits, adding uniform noise in `[-noise, noise]` first.
pub(super) fn quantize(canvas: &[f32], w: usize, h: usize, noise: f64, rng: &mut ChaCha8Rng) -> ColorFrame {
    let bytes: Vec<u8> = canvas
        .iter()
        .map(|&v| {
            let n = if noise > 0.0 { (unit(rng) * 2.0 - 1.0) * noise } else { 0.0 };
            (f64::from(v) + n).round().clamp(0.0, 255.0) as u8
        })
        .collect();
    ColorFrame::from_interleaved(w, h, &bytes).expect("canvas matches frame size")
}
