#![allow(dead_code)]

pub use gbe_core::reference::*;
