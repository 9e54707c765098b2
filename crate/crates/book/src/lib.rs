//! Guide chapters, compiled as doc-tests.

#[doc = include_str!("../../../book/src/intro.md")]
pub mod ch00_intro {}
#[doc = include_str!("../../../book/src/forms.md")]
pub mod ch01_forms {}
#[doc = include_str!("../../../book/src/local.md")]
pub mod ch02_local {}
#[doc = include_str!("../../../book/src/orbits.md")]
pub mod ch03_orbits {}
#[doc = include_str!("../../../book/src/averages.md")]
pub mod ch04_averages {}
#[doc = include_str!("../../../book/src/lattice.md")]
pub mod ch05_lattice {}
#[doc = include_str!("../../../book/src/sampler.md")]
pub mod ch06_sampler {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod ch07_cli {}
