//! Print the analytic computation, communication and signaling tables.

use gsfl::costmodel::{self, Algorithm, UnitCosts};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let u = UnitCosts::REFERENCE;
    let ts = [1u64, 50, 100, 150, 1000];
    let (m, n) = (200, 100);

    println!("computation (s)");
    for alg in Algorithm::ALL {
        let row: Vec<String> = ts
            .iter()
            .map(|&t| {
                costmodel::computation(alg, t, n, &u).map(|c| format!("{:>12.3}", c.as_secs()))
            })
            .collect::<Result<_, _>>()?;
        println!("{:<10}{}", alg.name(), row.join(""));
    }

    println!("\ncommunication (bytes)");
    for alg in Algorithm::ALL {
        let row: Vec<String> = ts
            .iter()
            .map(|&t| costmodel::communication(alg, t).map(|c| format!("{c:>12}")))
            .collect::<Result<_, _>>()?;
        println!("{:<10}{}", alg.name(), row.join(""));
    }

    println!("\nsignaling (messages, m={m}, n={n})");
    for alg in Algorithm::ALL {
        let row: Vec<String> = ts
            .iter()
            .map(|&t| costmodel::signaling(alg, t, m, n).map(|c| format!("{c:>12}")))
            .collect::<Result<_, _>>()?;
        println!("{:<10}{}", alg.name(), row.join(""));
    }

    let b = costmodel::gsfl_breakdown(&u);
    println!(
        "\nGSFL first iteration {} ms (published {} ms), later iterations {} ms",
        b.first_exact, b.first_published, b.subsequent
    );
    Ok(())
}
