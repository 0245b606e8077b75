//! Image-to-feature pipeline shared by the CLI and the end-to-end tests.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::featurize::{barcode_feature, BettiBinningConfig, FeatureKind};
use crate::image_io::{to_canonical, GrayImage, ImageError};
use crate::mciq::{mciq_vector, MciqError};
use crate::persistence::{vr_barcode, FiltrationParams, PersistenceBarcode, PersistenceError};
use crate::ulbp::{extract_landmarks, LbpConfig};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Image(#[from] ImageError),
    #[error(transparent)]
    Mciq(#[from] MciqError),
    #[error(transparent)]
    Persistence(#[from] PersistenceError),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ExtractConfig {
    pub lbp: LbpConfig,
    pub filtration: FiltrationParams,
    pub binning: BettiBinningConfig,
}

/// Landmark barcode of an image. An image without landmarks yields an empty
/// barcode, which featurizes to zero vectors.
pub fn landmark_barcode(img: &GrayImage, cfg: &ExtractConfig, max_dim: usize) -> Result<PersistenceBarcode, PipelineError> {
    let cloud = extract_landmarks(img, &cfg.lbp)?;
    let params = FiltrationParams {
        max_dim,
        ..cfg.filtration
    };
    match vr_barcode(&cloud, &params) {
        Ok(bc) => Ok(bc),
        Err(PersistenceError::EmptyCloud) => {
            log::warn!("no landmarks found; using an empty barcode");
            Ok(PersistenceBarcode::empty(params.threshold))
        }
        Err(e) => Err(e.into()),
    }
}

/// Resizes to the canonical 280x270 and computes the requested kinds, in the
/// order given. The barcode is computed once and only up to the highest
/// dimension any requested kind needs.
pub fn extract_features(
    img: &GrayImage,
    kinds: &[FeatureKind],
    cfg: &ExtractConfig,
) -> Result<Vec<(FeatureKind, Vec<f64>)>, PipelineError> {
    let img = to_canonical(img)?;
    let max_dim = kinds.iter().filter_map(|k| k.dim()).max();
    let barcode = max_dim
        .map(|d| landmark_barcode(&img, cfg, d))
        .transpose()?;
    kinds
        .iter()
        .map(|&kind| {
            let values = match kind {
                FeatureKind::Mciq => mciq_vector(&img)?,
                _ => barcode_feature(barcode.as_ref().expect("barcode computed"), kind, &cfg.binning)
                    .expect("barcode kind"),
            };
            Ok((kind, values))
        })
        .collect()
}
