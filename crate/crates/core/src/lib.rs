pub mod embedding;
pub mod groups;
pub mod quadratic;
pub mod surface;
pub mod words;
