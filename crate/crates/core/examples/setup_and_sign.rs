//! Set up a group, issue credentials, sign and verify anonymously.

use gsfl::group_signature::{self as gs, MemberId};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (params, mut admin) = gs::setup(b"example group", 1)?;
    let alice = gs::issue(&mut admin, &params, MemberId(1))?;
    let bob = gs::issue(&mut admin, &params, MemberId(2))?;
    let session = gs::new_session(&mut admin, &params);
    let public = session.public();

    let mut rng = ChaCha20Rng::seed_from_u64(1);
    let message = b"gradient update";
    let sig_a = gs::sign(&alice, &session, &params, message, &mut rng)?;
    let sig_b = gs::sign(&bob, &session, &params, message, &mut rng)?;

    println!("signature size: {} bytes", gs::Signature::ENCODED_LEN);
    println!(
        "alice verifies: {:?}",
        gs::verify(&params, &public, message, &sig_a)
    );
    println!(
        "bob verifies:   {:?}",
        gs::verify(&params, &public, message, &sig_b)
    );
    println!(
        "wrong message:  {:?}",
        gs::verify(&params, &public, b"other", &sig_a)
    );
    // Both signatures carry the same session values; only C3 differs.
    println!("same C3: {}", sig_a.c3 == sig_b.c3);

    let descriptor = gs::describe_session(&admin, &params, &session, &mut rng);
    println!(
        "session descriptor verifies: {:?}",
        descriptor.verify(&params, &public)
    );
    Ok(())
}
