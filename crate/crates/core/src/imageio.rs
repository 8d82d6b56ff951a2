//! Decoding and encoding of 8-bit RGB frames.

use std::fs;
use std::io::Write;
use std::path::Path;

use image::codecs::jpeg::JpegEncoder;
use image::codecs::png::{CompressionType, FilterType, PngEncoder};
use image::{ExtendedColorType, ImageEncoder};
use thiserror::Error;

use crate::frame::{ColorFrame, FrameError};

#[derive(Debug, Error)]
pub enum ImageIoError {
    #[error("failed to decode {path}: {source}")]
    Decode {
        path: String,
        #[source]
        source: image::ImageError,
    },
    #[error("failed to encode frame: {0}")]
    Encode(#[from] image::ImageError),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Output container for written frames.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Png,
    Jpeg {
        quality: u8,
    },
}

impl OutputFormat {
    pub fn extension(&self) -> &'static str {
        match self {
            OutputFormat::Png => "png",
            OutputFormat::Jpeg { .. } => "jpg",
        }
    }
}

/// Decodes a JPEG or PNG file into an RGB frame; alpha and bit depth are dropped.
pub fn load_color_frame(path: &Path) -> Result<ColorFrame, ImageIoError> {
    let img = image::open(path).map_err(|source| ImageIoError::Decode {
        path: path.display().to_string(),
        source,
    })?;
    let rgb = img.to_rgb8();
    let (w, h) = rgb.dimensions();
    Ok(ColorFrame::from_interleaved(
        w as usize,
        h as usize,
        rgb.as_raw(),
    )?)
}

/// Decodes an in-memory JPEG or PNG.
pub fn decode_color_frame(bytes: &[u8]) -> Result<ColorFrame, ImageIoError> {
    let img = image::load_from_memory(bytes).map_err(|source| ImageIoError::Decode {
        path: "<memory>".into(),
        source,
    })?;
    let rgb = img.to_rgb8();
    let (w, h) = rgb.dimensions();
    Ok(ColorFrame::from_interleaved(w as usize, h as usize, rgb.as_raw())?)
}

/// Width and height from the file header, without decoding pixels.
pub fn dimensions(path: &Path) -> Result<(usize, usize), ImageIoError> {
    let (w, h) = image::image_dimensions(path).map_err(|source| ImageIoError::Decode {
        path: path.display().to_string(),
        source,
    })?;
    Ok((w as usize, h as usize))
}

pub fn encode(frame: &ColorFrame, format: OutputFormat, out: impl Write) -> Result<(), ImageIoError> {
    let rgb = frame.to_interleaved();
    let (w, h) = (frame.width() as u32, frame.height() as u32);
    match format {
        OutputFormat::Png => {
            PngEncoder::new_with_quality(out, CompressionType::Fast, FilterType::Adaptive)
                .write_image(&rgb, w, h, ExtendedColorType::Rgb8)?
        }
        OutputFormat::Jpeg { quality } => {
            JpegEncoder::new_with_quality(out, quality.clamp(1, 100))
                .write_image(&rgb, w, h, ExtendedColorType::Rgb8)?
        }
    }
    Ok(())
}

pub fn encode_to_vec(frame: &ColorFrame, format: OutputFormat) -> Result<Vec<u8>, ImageIoError> {
    let mut buf = Vec::new();
    encode(frame, format, &mut buf)?;
    Ok(buf)
}

pub fn save_frame(path: &Path, frame: &ColorFrame, format: OutputFormat) -> Result<(), ImageIoError> {
    let buf = encode_to_vec(frame, format)?;
    fs::write(path, buf)?;
    Ok(())
}

/// True for file names with an extension this module can decode.
pub fn is_image_path(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .map(|e| matches!(e.to_ascii_lowercase().as_str(), "png" | "jpg" | "jpeg"))
        .unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn png_is_lossless() {
        let rgb: Vec<u8> = (0..5 * 4 * 3).map(|v| (v * 7 % 256) as u8).collect();
        let frame = ColorFrame::from_interleaved(5, 4, &rgb).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.png");
        save_frame(&path, &frame, OutputFormat::Png).unwrap();
        assert_eq!(dimensions(&path).unwrap(), (5, 4));
        assert_eq!(decode_color_frame(&std::fs::read(&path).unwrap()).unwrap(), frame);
        assert_eq!(load_color_frame(&path).unwrap(), frame);
    }

    #[test]
    fn decode_error_names_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("broken.png");
        fs::write(&path, b"not a png").unwrap();
        let err = load_color_frame(&path).unwrap_err();
        assert!(err.to_string().contains("broken.png"));
    }

    #[test]
    fn image_extensions() {
        assert!(is_image_path(Path::new("a/b.JPG")));
        assert!(is_image_path(Path::new("b.png")));
        assert!(!is_image_path(Path::new("b.txt")));
    }
}
