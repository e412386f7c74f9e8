//! Moving frames along space curves.
//!
//! Curves are sampled on a uniform arc-length grid ([`curve`]). Frenet and
//! type-1/type-2 Bishop frames are computed in closed form or by integrating
//! their frame equations ([`frames`]), and alternatively by integrating a
//! single two-component spinor whose quadratic forms reproduce the frame
//! ([`spinor`], [`spinor_ode`]). [`verify`] compares all of these, and
//! [`cli`] exposes them as the `spinframe` command.

pub mod cli;
pub mod curve;
pub mod frames;
pub mod integrate;
pub mod io;
pub mod mesh;
pub mod ortho;
pub mod pipeline;
pub mod spinor;
pub mod spinor_ode;
pub mod verify;
