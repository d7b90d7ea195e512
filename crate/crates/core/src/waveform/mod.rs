//! Discrete-time LTE SC-FDMA (LFDMA) signal generation.

mod config;
mod frame;
mod lfdma;
mod pulse;
mod symbols;

pub use config::{CpMode, Modulation, SignalConfig, DEFAULT_RRC_SPAN, SYMBOLS_PER_SLOT};
pub use frame::{generate_frame, FrameGenerator};
pub use lfdma::{add_cp, lfdma_block_closed_form, lfdma_block_dft, LfdmaModulator};
pub use pulse::{pulse_shape, rrc_taps, shape_symbols};
pub use symbols::{constellation, map_symbols, SymbolBlock};
