//! Run a full simulated session and print the message counts and losses.

use gsfl::protocol::{run_session, MessageKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let started = std::time::Instant::now();
    let out = run_session(20, 10, 5, 7)?;
    println!("messages on the medium: {}", out.transcript.len());
    println!(
        "signaling count:        {}",
        out.transcript.signaling_count()
    );
    println!(
        "admin fetches:          {}",
        out.transcript.count(MessageKind::LatestGsVerReq)
    );
    println!("server metrics:         {:?}", out.metrics);
    for (it, loss) in &out.losses {
        println!("iteration {it:>3}  loss {loss:.6}");
    }
    println!("client errors: {:?}", out.client_errors);
    println!(
        "elapsed {:?}, role timings {:?}",
        started.elapsed(),
        out.timings
    );
    Ok(())
}
