//! Internals of the `wanplan` binary: stage runners and report rendering.
//! Split out so the rendering code is testable outside the process
//! boundary; the stable interface is the command line itself.

pub mod pipeline;
pub mod render;
