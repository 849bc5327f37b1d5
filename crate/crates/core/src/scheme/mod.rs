//! Instance construction: parameter checks, the stabilizer, QRC and hardened
//! generators, obfuscation and the text formats.

mod construct;
pub mod io;
mod params;

pub use construct::{
    add_column_redundancy, gram_standard_form_holds, hardened_construct, obfuscate, qrc_construct,
    stabilizer_construct, stabilizer_construct_with, standard_form_holds, unobfuscated_layout, BuildOptions,
    HardenedParams, Instance, ObfuscationTrace, UnobfuscatedLayout, RETRY_BUDGET,
};
pub use params::{check_params, sample_params, CheckKind, ParamCheck, ParamReport, SchemeKind, SchemeMeta};
