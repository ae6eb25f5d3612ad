pub mod scan;
pub mod shape;
pub mod spectrum;
pub mod tomography;
