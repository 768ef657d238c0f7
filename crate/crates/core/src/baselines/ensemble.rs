use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::image::{HdrImage, LdrImage, Raster, Shape};

/// An element of the dihedral group of the rectangle grid: an optional
/// transpose followed by optional horizontal and vertical flips. The eight
/// combinations cover identity, the three rotations, both flips and both
/// transposes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dihedral {
    pub transpose: bool,
    pub flip_x: bool,
    pub flip_y: bool,
}

impl Dihedral {
    pub const IDENTITY: Dihedral = Dihedral { transpose: false, flip_x: false, flip_y: false };

    /// Fixed enumeration order; ensemble averages follow it.
    pub const ALL: [Dihedral; 8] = {
        let mut all = [Dihedral::IDENTITY; 8];
        let mut i = 0;
        while i < 8 {
            all[i] = Dihedral { transpose: i & 4 != 0, flip_x: i & 1 != 0, flip_y: i & 2 != 0 };
            i += 1;
        }
        all
    };

    pub fn inverse(self) -> Dihedral {
        if self.transpose {
            // Undoing the flips first swaps their axes.
            Dihedral { transpose: true, flip_x: self.flip_y, flip_y: self.flip_x }
        } else {
            self
        }
    }

    pub fn output_shape(self, shape: Shape) -> Shape {
        if self.transpose {
            shape.transposed()
        } else {
            shape
        }
    }

    /// Reorders channel-interleaved samples laid out as `shape`.
    pub fn permute<T: Copy>(self, shape: Shape, data: &[T]) -> (Shape, Vec<T>) {
        let out_shape = self.output_shape(shape);
        if data.is_empty() {
            return (out_shape, Vec::new());
        }
        let mut out = vec![data[0]; data.len()];
        for y in 0..shape.height {
            for x in 0..shape.width {
                let (mut u, mut v) = if self.transpose { (y, x) } else { (x, y) };
                if self.flip_x {
                    u = out_shape.width - 1 - u;
                }
                if self.flip_y {
                    v = out_shape.height - 1 - v;
                }
                let src = shape.index(x, y, 0);
                let dst = out_shape.index(u, v, 0);
                out[dst..dst + shape.channels].copy_from_slice(&data[src..src + shape.channels]);
            }
        }
        (out_shape, out)
    }
}

/// Inputs a reconstructor can be fed under a geometric transform.
pub trait Transform: Sized {
    fn transformed(&self, d: Dihedral) -> Self;
}

impl Transform for HdrImage {
    fn transformed(&self, d: Dihedral) -> Self {
        let (shape, data) = d.permute(self.shape(), self.data());
        HdrImage::from_shape(shape, data).expect("permutation preserves validity")
    }
}

impl Transform for LdrImage {
    fn transformed(&self, d: Dihedral) -> Self {
        let (shape, data) = d.permute(self.shape(), self.data());
        LdrImage::new(shape, data, *self.exposure()).expect("permutation preserves validity")
    }
}

impl Transform for Raster {
    fn transformed(&self, d: Dihedral) -> Self {
        let (shape, data) = d.permute(self.shape(), self.data());
        Raster::new(shape, data).expect("permutation preserves validity")
    }
}

impl<T: Transform> Transform for Vec<T> {
    fn transformed(&self, d: Dihedral) -> Self {
        self.iter().map(|x| x.transformed(d)).collect()
    }
}

/// Runs `reconstruct` on all eight dihedral transforms of `inputs`, maps
/// each output back to the input frame and averages them in
/// [`Dihedral::ALL`] order.
pub fn self_ensemble<I, F>(inputs: &I, mut reconstruct: F) -> Result<HdrImage>
where
    I: Transform,
    F: FnMut(&I) -> Result<HdrImage>,
{
    let mut acc: Option<(Shape, Vec<f64>)> = None;
    for d in Dihedral::ALL {
        let out = reconstruct(&inputs.transformed(d))?.transformed(d.inverse());
        match &mut acc {
            None => acc = Some((out.shape(), out.data().iter().map(|&v| v as f64).collect())),
            Some((shape, sum)) => {
                shape.ensure_same(&out.shape())?;
                for (s, &v) in sum.iter_mut().zip(out.data()) {
                    *s += v as f64;
                }
            }
        }
    }
    let (shape, sum) = acc.ok_or(Error::EmptyBracket)?;
    let n = Dihedral::ALL.len() as f64;
    HdrImage::from_shape(shape, sum.into_iter().map(|s| (s / n) as f32).collect())
}
