//! The generated description of configuration keys and output tables.

use std::fmt::Write as _;

use crate::config::COMMON_KEYS;
use crate::error::{EXIT_IO, EXIT_NUMERICAL, EXIT_VALIDATION};
use crate::run::OUTPUT_ROOT_VAR;
use crate::scenarios::registry;

/// Markdown listing every scenario, its configuration keys and the columns
/// of each CSV it writes.
pub fn schema_markdown() -> String {
    let mut s = String::new();
    let w = &mut s;
    writeln!(w, "# Output schema\n").unwrap();
    writeln!(w, "Generated by `beltrami schema`; do not edit by hand.\n").unwrap();
    writeln!(w, "## Configuration\n").unwrap();
    writeln!(
        w,
        "A run configuration is a TOML file with an optional `[run]` table \
         (`output`, `seed`, `svg`, `parallel`) and one `[[scenario]]` table per \
         experiment. Every scenario accepts `{}`; the other keys are listed below. \
         Unknown keys are rejected.\n",
        COMMON_KEYS.join("`, `")
    )
    .unwrap();
    writeln!(
        w,
        "`domain`, `mu` and `phi` are tables with a `kind` key:\n\n\
         - `domain`: `disk`; `square` (`half_width`); `slit-square` (`half_opening`); \
         `polygon` (`vertices`); `regular` (`sides`, `radius`); `annulus` (`center`, `inner`, `outer`).\n\
         - `mu`: `zero`; `constant` (`re`, `im`); `radial-stretch` (`k`); `log-blowup` (`center`).\n\
         - `phi`: `constant` (`value`); `cos` (`k`); `random-trig` (`seed`, `degree`); \
         `step-smoothed` (`sharpness`).\n"
    )
    .unwrap();
    writeln!(
        w,
        "Outputs go to `${OUTPUT_ROOT_VAR}/<run.output>/<scenario output>/<table>.csv` \
         (the working directory when the variable is unset). Each run directory also \
         holds `manifest.toml` and a copy of this file.\n"
    )
    .unwrap();
    writeln!(
        w,
        "Exit codes: 0 success, {EXIT_VALIDATION} invalid configuration (nothing written), \
         {EXIT_NUMERICAL} numerical failure, {EXIT_IO} I/O error.\n"
    )
    .unwrap();
    writeln!(
        w,
        "Every CSV starts with `#` comment lines naming the scenario, the table and each \
         column with its unit and meaning, followed by a header row `name [unit]`.\n"
    )
    .unwrap();
    for e in registry() {
        writeln!(w, "## `{}`\n", e.name).unwrap();
        writeln!(w, "{}. Tags: {}.\n", capitalize(e.description), e.tags.join(", ")).unwrap();
        if !e.keys.is_empty() {
            writeln!(w, "| key | meaning (default) |\n|---|---|").unwrap();
            for (k, m) in e.keys {
                writeln!(w, "| `{k}` | {m} |").unwrap();
            }
            writeln!(w).unwrap();
        }
        for t in e.tables {
            writeln!(w, "### `{}.csv`\n", t.name).unwrap();
            writeln!(w, "{}.\n", capitalize(t.description)).unwrap();
            writeln!(w, "| column | unit | meaning |\n|---|---|---|").unwrap();
            for c in t.columns {
                writeln!(w, "| `{}` | {} | {} |", c.name, c.unit, c.meaning.replace('|', "\\|")).unwrap();
            }
            writeln!(w).unwrap();
        }
    }
    s
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}
