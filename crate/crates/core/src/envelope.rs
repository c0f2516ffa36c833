//! ElGamal over the pairing target group.
//!
//! Textbook mode encrypts a `GT` element directly (`c1 = gt^y`,
//! `c2 = M * h^y`) and decrypts with `c2 * c1^(r - x)`. Gradients are byte
//! strings, so the protocol uses the hybrid mode: the same `h^y` is fed to a
//! KDF and the payload is sealed with AES-256-GCM.

use aes_gcm::aead::{Aead, KeyInit, Payload};
use aes_gcm::{Aes256Gcm, Key, Nonce};
use rand::{CryptoRng, RngCore};
use thiserror::Error;

use crate::algebra::{wide_hash, GroupElement, Gt, Scalar};

/// KDF domain tag.
pub const KEM_TAG: &[u8] = b"GSFL/kem/v1";
const KEY_LEN: usize = 32;
const NONCE_LEN: usize = 12;
/// AES-GCM tag width.
pub const TAG_LEN: usize = 16;
pub const MAX_PAYLOAD: usize = u32::MAX as usize - TAG_LEN;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum EnvelopeError {
    #[error("ciphertext failed authentication")]
    AuthFailure,
    #[error("malformed ciphertext")]
    MalformedCiphertext,
    #[error("payload exceeds {MAX_PAYLOAD} bytes")]
    PayloadTooLarge,
}

/// ElGamal key pair `(x, h = gt^x)`. Servers use one for updates; clients
/// use one to receive selection notices.
#[derive(Clone, PartialEq, Eq)]
pub struct ServerKeys {
    secret: Scalar,
    pub public: Gt,
}

impl std::fmt::Debug for ServerKeys {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ServerKeys")
            .field("public", &self.public)
            .finish_non_exhaustive()
    }
}

impl ServerKeys {
    pub fn from_secret(secret: Scalar) -> Self {
        ServerKeys {
            secret,
            public: Gt::generator().pow(&secret),
        }
    }

    pub fn secret(&self) -> &Scalar {
        &self.secret
    }
}

pub fn server_keygen(rng: &mut (impl RngCore + CryptoRng)) -> ServerKeys {
    ServerKeys::from_secret(Scalar::random_nonzero(rng))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TextbookCiphertext {
    pub c1: Gt,
    pub c2: Gt,
}

impl TextbookCiphertext {
    pub const ENCODED_LEN: usize = 2 * Gt::ENCODED_LEN;

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = self.c1.to_bytes();
        out.extend_from_slice(&self.c2.to_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, EnvelopeError> {
        if bytes.len() != Self::ENCODED_LEN {
            return Err(EnvelopeError::MalformedCiphertext);
        }
        let (a, b) = bytes.split_at(Gt::ENCODED_LEN);
        Ok(TextbookCiphertext {
            c1: Gt::from_bytes(a).map_err(|_| EnvelopeError::MalformedCiphertext)?,
            c2: Gt::from_bytes(b).map_err(|_| EnvelopeError::MalformedCiphertext)?,
        })
    }
}

pub fn encrypt_textbook(
    pk: &Gt,
    message: &Gt,
    rng: &mut (impl RngCore + CryptoRng),
) -> TextbookCiphertext {
    encrypt_textbook_with(pk, message, &Scalar::random_nonzero(rng))
}

/// Encrypt with a caller-chosen ephemeral exponent `y`.
pub fn encrypt_textbook_with(pk: &Gt, message: &Gt, y: &Scalar) -> TextbookCiphertext {
    let s = pk.pow(y);
    TextbookCiphertext {
        c1: Gt::generator().pow(y),
        c2: *message * s,
    }
}

pub fn decrypt_textbook(sk: &ServerKeys, ct: &TextbookCiphertext) -> Gt {
    // r - x and -x are the same residue mod r.
    ct.c2 * ct.c1.pow(&-sk.secret)
}

/// Decode then decrypt.
pub fn decrypt_textbook_bytes(sk: &ServerKeys, bytes: &[u8]) -> Result<Gt, EnvelopeError> {
    TextbookCiphertext::from_bytes(bytes).map(|ct| decrypt_textbook(sk, &ct))
}

/// KEM encapsulation `c1` plus the AEAD-sealed payload.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HybridCiphertext {
    pub c1: Gt,
    pub sealed: Vec<u8>,
}

impl HybridCiphertext {
    /// `c1 ‖ len:u32be ‖ sealed`.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = self.c1.to_bytes();
        out.extend_from_slice(&(self.sealed.len() as u32).to_be_bytes());
        out.extend_from_slice(&self.sealed);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, EnvelopeError> {
        let header = Gt::ENCODED_LEN + 4;
        if bytes.len() < header {
            return Err(EnvelopeError::MalformedCiphertext);
        }
        let c1 = Gt::from_bytes(&bytes[..Gt::ENCODED_LEN])
            .map_err(|_| EnvelopeError::MalformedCiphertext)?;
        let len_bytes: [u8; 4] = bytes[Gt::ENCODED_LEN..header].try_into().expect("4 bytes");
        let len = u32::from_be_bytes(len_bytes) as usize;
        if bytes.len() - header != len || len < TAG_LEN {
            return Err(EnvelopeError::MalformedCiphertext);
        }
        Ok(HybridCiphertext {
            c1,
            sealed: bytes[header..].to_vec(),
        })
    }
}

fn derive_cipher(shared: &Gt) -> (Aes256Gcm, [u8; NONCE_LEN]) {
    let okm = wide_hash(KEM_TAG, &[&shared.to_bytes()]);
    let key = Key::<Aes256Gcm>::from_slice(&okm[..KEY_LEN]);
    let mut nonce = [0u8; NONCE_LEN];
    nonce.copy_from_slice(&okm[KEY_LEN..KEY_LEN + NONCE_LEN]);
    (Aes256Gcm::new(key), nonce)
}

pub fn seal(
    pk: &Gt,
    payload: &[u8],
    rng: &mut (impl RngCore + CryptoRng),
) -> Result<HybridCiphertext, EnvelopeError> {
    if payload.len() > MAX_PAYLOAD {
        return Err(EnvelopeError::PayloadTooLarge);
    }
    let y = Scalar::random_nonzero(rng);
    let c1 = Gt::generator().pow(&y);
    let (cipher, nonce) = derive_cipher(&pk.pow(&y));
    let aad = c1.to_bytes();
    let sealed = cipher
        .encrypt(
            Nonce::from_slice(&nonce),
            Payload {
                msg: payload,
                aad: &aad,
            },
        )
        .map_err(|_| EnvelopeError::PayloadTooLarge)?;
    Ok(HybridCiphertext { c1, sealed })
}

pub fn open(sk: &ServerKeys, ct: &HybridCiphertext) -> Result<Vec<u8>, EnvelopeError> {
    let (cipher, nonce) = derive_cipher(&ct.c1.pow(&sk.secret));
    let aad = ct.c1.to_bytes();
    cipher
        .decrypt(
            Nonce::from_slice(&nonce),
            Payload {
                msg: &ct.sealed,
                aad: &aad,
            },
        )
        .map_err(|_| EnvelopeError::AuthFailure)
}

/// Decode then [`open`].
pub fn open_bytes(sk: &ServerKeys, bytes: &[u8]) -> Result<Vec<u8>, EnvelopeError> {
    open(sk, &HybridCiphertext::from_bytes(bytes)?)
}
