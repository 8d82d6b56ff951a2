//! Binary masks, disk morphology and 8-connected component labeling.

use crate::frame::Plane;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mask {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl Mask {
    pub fn new(width: usize, height: usize, bits: Vec<bool>) -> Self {
        assert_eq!(bits.len(), width * height, "mask size");
        Self { width, height, bits }
    }

    pub fn zeros(width: usize, height: usize) -> Self {
        Self::new(width, height, vec![false; width * height])
    }

    /// Pixels with `value >= threshold`.
    pub fn threshold(plane: &Plane, threshold: u8) -> Self {
        Self::new(
            plane.width(),
            plane.height(),
            plane.samples().iter().map(|&v| v >= threshold).collect(),
        )
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, v: bool) {
        self.bits[y * self.width + x] = v;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

/// Offsets `(dx, dy)` with `dx² + dy² <= r²`.
pub fn disk(radius: usize) -> Vec<(isize, isize)> {
    let r = radius as isize;
    let mut out = Vec::new();
    for dy in -r..=r {
        for dx in -r..=r {
            if dx * dx + dy * dy <= r * r {
                out.push((dx, dy));
            }
        }
    }
    out
}

/// Erosion (`all == true`) or dilation (`all == false`); out-of-frame
/// neighbors are ignored.
fn morph(mask: &Mask, se: &[(isize, isize)], all: bool) -> Mask {
    let (w, h) = (mask.width as isize, mask.height as isize);
    let mut out = Mask::zeros(mask.width, mask.height);
    for y in 0..h {
        for x in 0..w {
            let hit = |&(dx, dy): &(isize, isize)| {
                let (sx, sy) = (x + dx, y + dy);
                if sx < 0 || sy < 0 || sx >= w || sy >= h {
                    all
                } else {
                    mask.get(sx as usize, sy as usize)
                }
            };
            let v = if all { se.iter().all(hit) } else { se.iter().any(hit) };
            out.set(x as usize, y as usize, v);
        }
    }
    out
}

pub fn erode(mask: &Mask, radius: usize) -> Mask {
    morph(mask, &disk(radius), true)
}

pub fn dilate(mask: &Mask, radius: usize) -> Mask {
    morph(mask, &disk(radius), false)
}

/// Erosion followed by dilation with the same disk.
pub fn open(mask: &Mask, radius: usize) -> Mask {
    if radius == 0 {
        return mask.clone();
    }
    dilate(&erode(mask, radius), radius)
}

/// Pixel-aligned half-open rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PixelRect {
    pub x0: usize,
    pub y0: usize,
    pub x1: usize,
    pub y1: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    /// 1-based, in raster order of each component's first pixel.
    pub label: u32,
    pub area: usize,
    pub bbox: PixelRect,
}

/// Label image (0 = background) and per-component summaries.
pub fn label_components(mask: &Mask) -> (Vec<u32>, Vec<Component>) {
    let (w, h) = (mask.width, mask.height);
    let mut labels = vec![0u32; w * h];
    let mut comps = Vec::new();
    let mut stack = Vec::new();
    for start in 0..w * h {
        if !mask.bits[start] || labels[start] != 0 {
            continue;
        }
        let label = comps.len() as u32 + 1;
        let (sx, sy) = (start % w, start / w);
        let mut c = Component {
            label,
            area: 0,
            bbox: PixelRect { x0: sx, y0: sy, x1: sx + 1, y1: sy + 1 },
        };
        labels[start] = label;
        stack.push(start);
        while let Some(i) = stack.pop() {
            let (x, y) = (i % w, i / w);
            c.area += 1;
            c.bbox.x0 = c.bbox.x0.min(x);
            c.bbox.y0 = c.bbox.y0.min(y);
            c.bbox.x1 = c.bbox.x1.max(x + 1);
            c.bbox.y1 = c.bbox.y1.max(y + 1);
            for ny in y.saturating_sub(1)..=(y + 1).min(h - 1) {
                for nx in x.saturating_sub(1)..=(x + 1).min(w - 1) {
                    let j = ny * w + nx;
                    if mask.bits[j] && labels[j] == 0 {
                        labels[j] = label;
                        stack.push(j);
                    }
                }
            }
        }
        comps.push(c);
    }
    (labels, comps)
}

pub fn connected_components(mask: &Mask) -> Vec<Component> {
    label_components(mask).1
}
