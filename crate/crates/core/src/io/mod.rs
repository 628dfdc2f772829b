//! Text formats read and written by the command-line tool.

mod network_doc;
mod profile_file;
mod state_text;

pub use network_doc::{parse_network_document, write_network_document, NetworkDocument};
pub use profile_file::{parse_profile, parse_profile_spec, write_profile};
pub use state_text::{fmt_sci, parse_state, write_state};

use crate::fringe::FringeResult;

/// `phi,rate` CSV with twelve significant digits and LF line endings.
pub fn fringe_csv(f: &FringeResult) -> String {
    let mut out = String::from("phi,rate\n");
    for (phi, r) in f.phase_grid.iter().zip(&f.rates) {
        out.push_str(&fmt_sci(*phi));
        out.push(',');
        out.push_str(&fmt_sci(*r));
        out.push('\n');
    }
    out
}
