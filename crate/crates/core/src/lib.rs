//! Morph attack detection from two compact hand-crafted descriptors:
//!
//! * MCIQ, a 50-bin histogram of pairwise block quality indices over a 6x6
//!   grid of the face image ([`mciq`]);
//! * persistent homology of the point cloud of pixels carrying one uniform
//!   LBP code ([`ulbp`], [`persistence`]), vectorized as Betti-curve bins or
//!   barcode statistics ([`featurize`]).
//!
//! Features are classified with a cubic-kernel SVM ([`classify`]) under
//! repeated balanced cross-validation or cross-database testing ([`eval`]).

pub mod classify;
pub mod dataset;
pub mod eval;
pub mod featurize;
pub mod image_io;
pub mod mciq;
pub mod persistence;
pub mod pipeline;
pub mod plot;
pub mod synth;
pub mod ulbp;

pub use classify::{predict, train_svm, SvmModel, TrainConfig};
pub use eval::{cross_db, five_fold_cv, EvalConfig, EvalReport, LabeledDataset};
pub use featurize::{FeatureKind, FeatureVector, Label};
pub use image_io::GrayImage;
pub use persistence::{vr_barcode, FiltrationParams, PersistenceBarcode};
pub use ulbp::{extract_landmarks, LbpConfig, PointCloud};
