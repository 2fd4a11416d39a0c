//! A small sweep over (q, n), printed as the CSV the plotting scripts read.

use ffprime::budget::Limits;
use ffprime::counting::{sweep, write_sweep_csv, Template};

fn main() -> ffprime::error::Result<()> {
    let template = Template::parse("avoid:0", 0)?;
    let rows = sweep(&template, &[2, 3, 4], 2..=5, 0.25, 0.1, &Limits::spectrum());
    write_sweep_csv(&rows, std::io::stdout().lock())
}
