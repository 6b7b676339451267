//! Language server front ends for RT-lite: the textual (LSP) and graphical
//! endpoints, their transports, and a headless SVG renderer.

pub mod glsp;
pub mod jsonrpc;
pub mod lsp;
pub mod server;
pub mod shared;
pub mod svg;
pub mod wire;
