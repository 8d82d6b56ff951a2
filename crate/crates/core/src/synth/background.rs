use super::{rng, unit, Background, SynthConfig, SynthError};
use crate::imageio;

/// Background rendered once with a margin wide enough for the largest
/// jitter shift, then resampled per frame.
pub(super) struct Canvas {
    width: usize,
    height: usize,
    margin: usize,
    stride: usize,
    rgb: Vec<f32>,
}

fn smoothstep(t: f64) -> f64 {
    t * t * (3.0 - 2.0 * t)
}

impl Canvas {
    pub(super) fn build(cfg: &SynthConfig) -> Result<Self, SynthError> {
        let margin = cfg.background_jitter.ceil() as usize + 1;
        let stride = cfg.width + 2 * margin;
        let rows = cfg.height + 2 * margin;
        let mut rgb = vec![0f32; stride * rows * 3];
        match &cfg.background {
            Background::Flat { color } => {
                for px in rgb.chunks_exact_mut(3) {
                    px.copy_from_slice(&color.map(f32::from));
                }
            }
            Background::Noise { seed, amplitude, color, cell } => {
                let (gw, gh) = (stride / cell + 2, rows / cell + 2);
                let mut r = rng(*seed, 3);
                let lattice: Vec<f64> = (0..gw * gh * 3).map(|_| unit(&mut r) * 2.0 - 1.0).collect();
                let at = |gx: usize, gy: usize, c: usize| lattice[(gy * gw + gx) * 3 + c];
                for y in 0..rows {
                    let fy = y as f64 / *cell as f64;
                    let (gy, ty) = (fy.floor() as usize, smoothstep(fy.fract()));
                    for x in 0..stride {
                        let fx = x as f64 / *cell as f64;
                        let (gx, tx) = (fx.floor() as usize, smoothstep(fx.fract()));
                        for c in 0..3 {
                            let top = at(gx, gy, c) * (1.0 - tx) + at(gx + 1, gy, c) * tx;
                            let bot = at(gx, gy + 1, c) * (1.0 - tx) + at(gx + 1, gy + 1, c) * tx;
                            let v = f64::from(color[c]) + amplitude * (top * (1.0 - ty) + bot * ty);
                            rgb[(y * stride + x) * 3 + c] = v.clamp(0.0, 255.0) as f32;
                        }
                    }
                }
            }
            Background::Textured { path } => {
                let img = imageio::load_color_frame(path)?;
                let (iw, ih) = (img.width(), img.height());
                for y in 0..rows {
                    for x in 0..stride {
                        let p = img.pixel(x % iw, y % ih);
                        rgb[(y * stride + x) * 3..][..3].copy_from_slice(&p.map(f32::from));
                    }
                }
            }
        }
        Ok(Self {
            width: cfg.width,
            height: cfg.height,
            margin,
            stride,
            rgb,
        })
    }

    /// Frame-sized interleaved RGB shifted by `(dx, dy)` with bilinear
    /// interpolation. A zero shift copies the canvas exactly.
    pub(super) fn sample(&self, dx: f64, dy: f64) -> Vec<f32> {
        let (ox, oy) = (self.margin as f64 + dx, self.margin as f64 + dy);
        let (ix, iy) = (ox.floor() as usize, oy.floor() as usize);
        let (tx, ty) = ((ox - ox.floor()) as f32, (oy - oy.floor()) as f32);
        let last_x = self.stride - 1;
        let last_y = self.rgb.len() / 3 / self.stride - 1;
        let mut out = vec![0f32; self.width * self.height * 3];
        for y in 0..self.height {
            let y0 = iy + y;
            let y1 = (y0 + 1).min(last_y);
            for x in 0..self.width {
                let x0 = ix + x;
                let x1 = (x0 + 1).min(last_x);
                for c in 0..3 {
                    let v = |xx: usize, yy: usize| self.rgb[(yy * self.stride + xx) * 3 + c];
                    let o = &mut out[(y * self.width + x) * 3 + c];
                    *o = if tx == 0.0 && ty == 0.0 {
                        v(x0, y0)
                    } else {
                        let top = v(x0, y0) * (1.0 - tx) + v(x1, y0) * tx;
                        let bot = v(x0, y1) * (1.0 - tx) + v(x1, y1) * tx;
                        top * (1.0 - ty) + bot * ty
                    };
                }
            }
        }
        out
    }
}
