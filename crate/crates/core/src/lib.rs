pub mod algebra;
pub mod costmodel;
pub mod envelope;
pub mod fedlearn;
pub mod group_signature;
pub mod harness;
pub mod protocol;
