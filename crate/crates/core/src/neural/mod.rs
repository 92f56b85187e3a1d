//! Minimal dense-network substrate: MLP forward/backward, Adam, and
//! Polyak soft target updates. All arithmetic is 64-bit.

mod adam;
mod mlp;

pub use adam::{adam_step, AdamState};
pub use mlp::{
    init_mlp, soft_update, widen_input_column, Dense, ForwardCache, HiddenActivation, MlpGrads,
    MlpParams, MlpSpec, NeuralError, OutputActivation,
};
