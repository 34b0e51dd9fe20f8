//! Runs every verification suite and prints the ledger as CSV.

use adslf::verify::{run_verification, Status, VerifyOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ledger = run_verification(&VerifyOptions::default())?;
    print!("{}", ledger.to_csv()?);
    eprintln!(
        "{} entries: {} property-pass, {} property-fail, {} match, {} mismatch",
        ledger.entries.len(),
        ledger.count(Status::PropertyPass),
        ledger.count(Status::PropertyFail),
        ledger.count(Status::Match),
        ledger.count(Status::Mismatch)
    );
    std::process::exit(ledger.exit_code());
}
