//! Textbook ElGamal in GT and the hybrid envelope used for updates.

use gsfl::algebra::{GroupElement, Gt};
use gsfl::envelope::{self, HybridCiphertext};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha20Rng::seed_from_u64(3);
    let keys = envelope::server_keygen(&mut rng);

    let m = Gt::random(&mut rng);
    let ct = envelope::encrypt_textbook(&keys.public, &m, &mut rng);
    println!("textbook ciphertext: {} bytes", ct.to_bytes().len());
    println!(
        "textbook round trip: {}",
        envelope::decrypt_textbook(&keys, &ct) == m
    );

    let payload = b"model update bytes".to_vec();
    let sealed = envelope::seal(&keys.public, &payload, &mut rng)?;
    let bytes = sealed.to_bytes();
    println!(
        "hybrid ciphertext: {} bytes for {} payload bytes",
        bytes.len(),
        payload.len()
    );
    println!(
        "hybrid round trip: {}",
        envelope::open_bytes(&keys, &bytes)? == payload
    );

    let mut tampered = HybridCiphertext::from_bytes(&bytes)?;
    tampered.sealed[0] ^= 1;
    println!("tampered: {:?}", envelope::open(&keys, &tampered));

    let other = envelope::server_keygen(&mut rng);
    println!("wrong key: {:?}", envelope::open_bytes(&other, &bytes));
    Ok(())
}
