use std::path::Path;

use exr::prelude::*;
use hdrbench_core::HdrImage;

use crate::error::{Error, Result as BenchResult};

/// Reads the first valid layer. RGB channels are used when present,
/// otherwise a luminance (`Y`) or lone channel.
pub fn read_exr(path: &Path) -> BenchResult<HdrImage> {
    let image = read()
        .no_deep_data()
        .largest_resolution_level()
        .all_channels()
        .first_valid_layer()
        .all_attributes()
        .non_parallel()
        .from_file(path)
        .map_err(|e| Error::format(path, e))?;
    let layer = image.layer_data;
    let (w, h) = (layer.size.width(), layer.size.height());
    let channels = &layer.channel_data.list;
    let find = |name: &str| channels.iter().find(|c| c.name.eq_case_insensitive(name));

    let planes: Vec<Vec<f32>> = match (find("R"), find("G"), find("B")) {
        (Some(r), Some(g), Some(b)) => [r, g, b]
            .iter()
            .map(|c| c.sample_data.values_as_f32().collect())
            .collect(),
        _ => {
            let c = find("Y")
                .or(if channels.len() == 1 { channels.first() } else { None })
                .ok_or_else(|| Error::format(path, "no R/G/B or Y channels"))?;
            vec![c.sample_data.values_as_f32().collect()]
        }
    };
    let n = planes.len();
    let mut data = Vec::with_capacity(w * h * n);
    for i in 0..w * h {
        for p in &planes {
            data.push(p[i]);
        }
    }
    HdrImage::new(w, h, n, data).map_err(|e| Error::invalid(path, e))
}

/// Writes 32-bit float channels (`R`, `G`, `B` or `Y`), uncompressed,
/// so the bytes depend only on the pixel values.
pub fn write_exr(path: &Path, image: &HdrImage) -> BenchResult<()> {
    super::create_parent(path)?;
    let (w, h, n) = (image.width(), image.height(), image.channels());
    let plane = |c: usize| -> Vec<f32> { image.data().iter().skip(c).step_by(n).copied().collect() };
    let list: SmallVec<[AnyChannel<FlatSamples>; 4]> = if n == 3 {
        ["R", "G", "B"]
            .iter()
            .enumerate()
            .map(|(c, name)| AnyChannel::new(*name, FlatSamples::F32(plane(c))))
            .collect()
    } else {
        std::iter::once(AnyChannel::new("Y", FlatSamples::F32(plane(0)))).collect()
    };
    let layer = Layer::new(
        (w, h),
        LayerAttributes::default(),
        Encoding::UNCOMPRESSED,
        AnyChannels::sort(list),
    );
    Image::from_layer(layer)
        .write()
        .non_parallel()
        .to_file(path)
        .map_err(|e| match e {
            exr::error::Error::Io(io) => Error::io(path, io),
            other => Error::format(path, other),
        })
}
