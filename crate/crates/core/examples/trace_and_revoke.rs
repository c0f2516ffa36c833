//! The admin opens a signature to its signer, revokes the member and
//! rotates the session.

use gsfl::group_signature::{self as gs, MemberId};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (params, mut admin) = gs::setup(b"trace example", 1)?;
    let creds: Vec<_> = (0..5)
        .map(|i| gs::issue(&mut admin, &params, MemberId(i)))
        .collect::<Result<_, _>>()?;
    let session = gs::new_session(&mut admin, &params);
    let mut rng = ChaCha20Rng::seed_from_u64(2);

    let sig = gs::sign(&creds[3], &session, &params, b"suspicious update", &mut rng)?;
    let signer = gs::open(&admin, &session, &sig)?;
    println!("signature opened to {signer:?}");

    let next = gs::revoke(&mut admin, &params, signer, "poisoned gradients")?;
    println!(
        "session rotated: {} -> {}",
        session.session_id, next.session_id
    );
    println!("revocation table:\n{}", admin.export_revocation_table());

    // An old-session signature no longer verifies under the new session.
    let stale = gs::verify(&params, &next.public(), b"suspicious update", &sig);
    println!("old signature under new session: {stale:?}");

    let mut revoked = creds[3].clone();
    revoked.mark_revoked();
    println!(
        "revoked member signs: {:?}",
        gs::sign(&revoked, &next, &params, b"again", &mut rng).err()
    );

    let fresh = gs::sign(&creds[0], &next, &params, b"honest", &mut rng)?;
    println!(
        "active member under new session: {:?}",
        gs::verify(&params, &next.public(), b"honest", &fresh)
    );
    Ok(())
}
