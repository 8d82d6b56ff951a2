//! Raster types. All planes are row-major 8-bit samples.

use thiserror::Error;

/// Smallest frame side; a 3×3 blur kernel must fit.
pub const MIN_FRAME_SIDE: usize = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrameError {
    #[error("frame {width}x{height} is smaller than {min}x{min}", min = MIN_FRAME_SIDE)]
    TooSmall { width: usize, height: usize },
    #[error("plane has {actual} samples, expected {expected}")]
    PlaneSize { expected: usize, actual: usize },
}

/// A single 8-bit sample plane.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Plane {
    width: usize,
    height: usize,
    samples: Vec<u8>,
}

impl Plane {
    pub fn new(width: usize, height: usize, samples: Vec<u8>) -> Result<Self, FrameError> {
        if samples.len() != width * height {
            return Err(FrameError::PlaneSize {
                expected: width * height,
                actual: samples.len(),
            });
        }
        Ok(Self {
            width,
            height,
            samples,
        })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        Self {
            width,
            height,
            samples: vec![value; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn samples(&self) -> &[u8] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [u8] {
        &mut self.samples
    }

    pub fn into_samples(self) -> Vec<u8> {
        self.samples
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.samples[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: u8) {
        self.samples[y * self.width + x] = v;
    }

    pub fn row(&self, y: usize) -> &[u8] {
        &self.samples[y * self.width..(y + 1) * self.width]
    }

    pub fn same_dims(&self, other: &Plane) -> bool {
        self.width == other.width && self.height == other.height
    }
}

/// An RGB frame stored as three planes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColorFrame {
    r: Plane,
    g: Plane,
    b: Plane,
}

impl ColorFrame {
    pub fn new(
        width: usize,
        height: usize,
        r: Vec<u8>,
        g: Vec<u8>,
        b: Vec<u8>,
    ) -> Result<Self, FrameError> {
        if width < MIN_FRAME_SIDE || height < MIN_FRAME_SIDE {
            return Err(FrameError::TooSmall { width, height });
        }
        Ok(Self {
            r: Plane::new(width, height, r)?,
            g: Plane::new(width, height, g)?,
            b: Plane::new(width, height, b)?,
        })
    }

    pub fn from_planes(r: Plane, g: Plane, b: Plane) -> Result<Self, FrameError> {
        let (w, h) = (r.width, r.height);
        if !r.same_dims(&g) || !r.same_dims(&b) {
            return Err(FrameError::PlaneSize {
                expected: w * h,
                actual: if r.same_dims(&g) { b.samples.len() } else { g.samples.len() },
            });
        }
        Self::new(w, h, r.samples, g.samples, b.samples)
    }

    pub fn filled(width: usize, height: usize, rgb: [u8; 3]) -> Result<Self, FrameError> {
        let n = width * height;
        Self::new(width, height, vec![rgb[0]; n], vec![rgb[1]; n], vec![rgb[2]; n])
    }

    /// From packed `RGBRGB...` samples.
    pub fn from_interleaved(width: usize, height: usize, rgb: &[u8]) -> Result<Self, FrameError> {
        let n = width * height;
        if rgb.len() != 3 * n {
            return Err(FrameError::PlaneSize {
                expected: 3 * n,
                actual: rgb.len(),
            });
        }
        let mut r = Vec::with_capacity(n);
        let mut g = Vec::with_capacity(n);
        let mut b = Vec::with_capacity(n);
        for px in rgb.chunks_exact(3) {
            r.push(px[0]);
            g.push(px[1]);
            b.push(px[2]);
        }
        Self::new(width, height, r, g, b)
    }

    pub fn to_interleaved(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(3 * self.r.samples.len());
        for ((&r, &g), &b) in self
            .r
            .samples
            .iter()
            .zip(&self.g.samples)
            .zip(&self.b.samples)
        {
            out.extend_from_slice(&[r, g, b]);
        }
        out
    }

    pub fn width(&self) -> usize {
        self.r.width
    }

    pub fn height(&self) -> usize {
        self.r.height
    }

    pub fn red(&self) -> &Plane {
        &self.r
    }

    pub fn green(&self) -> &Plane {
        &self.g
    }

    pub fn blue(&self) -> &Plane {
        &self.b
    }

    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        [self.r.get(x, y), self.g.get(x, y), self.b.get(x, y)]
    }

    pub fn set_pixel(&mut self, x: usize, y: usize, rgb: [u8; 3]) {
        self.r.set(x, y, rgb[0]);
        self.g.set(x, y, rgb[1]);
        self.b.set(x, y, rgb[2]);
    }

    pub fn same_dims(&self, other: &ColorFrame) -> bool {
        self.r.same_dims(&other.r)
    }
}

/// Blurred luminance of a color frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayFrame(Plane);

impl GrayFrame {
    pub fn new(plane: Plane) -> Self {
        Self(plane)
    }

    pub fn plane(&self) -> &Plane {
        &self.0
    }

    pub fn width(&self) -> usize {
        self.0.width
    }

    pub fn height(&self) -> usize {
        self.0.height
    }
}

/// Three-frame difference magnitude, saturated to 8 bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MotionLikelihood(Plane);

impl MotionLikelihood {
    pub fn new(plane: Plane) -> Self {
        Self(plane)
    }

    pub fn plane(&self) -> &Plane {
        &self.0
    }

    pub fn into_plane(self) -> Plane {
        self.0
    }

    pub fn width(&self) -> usize {
        self.0.width
    }

    pub fn height(&self) -> usize {
        self.0.height
    }
}
