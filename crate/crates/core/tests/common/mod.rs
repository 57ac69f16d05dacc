#![allow(dead_code)]

pub mod elastica;
pub mod props;
