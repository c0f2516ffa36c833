//! Bit-exact wire encoding of client messages.
//!
//! ```text
//! gid:16 ‖ mid:16 ‖ rand:128 ‖ payload_len:32 ‖ payload ‖ gs_len:16 ‖ gs ‖ ttl:8 ‖ ts:32
//! ```
//!
//! All integers are big-endian.

use std::time::{SystemTime, UNIX_EPOCH};

use thiserror::Error;

pub const DEFAULT_TTL: u8 = 8;

/// Bytes taken by everything except `payload` and `gs`.
pub const FIXED_OVERHEAD: usize = 2 + 2 + 16 + 4 + 2 + 1 + 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum WireError {
    #[error("message truncated")]
    Truncated,
    #[error("{0} trailing bytes after message")]
    TrailingBytes(usize),
    #[error("payload longer than 2^32 - 1 bytes")]
    PayloadTooLarge,
    #[error("signature field longer than 2^16 - 1 bytes")]
    SignatureTooLarge,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WireMessage {
    pub gid: u16,
    pub mid: u16,
    pub rand: u128,
    pub payload: Vec<u8>,
    pub gs: Vec<u8>,
    pub ttl: u8,
    pub ts: u32,
}

impl WireMessage {
    pub fn encoded_len(&self) -> usize {
        FIXED_OVERHEAD + self.payload.len() + self.gs.len()
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>, WireError> {
        let payload_len =
            u32::try_from(self.payload.len()).map_err(|_| WireError::PayloadTooLarge)?;
        let gs_len = u16::try_from(self.gs.len()).map_err(|_| WireError::SignatureTooLarge)?;
        let mut out = Vec::with_capacity(self.encoded_len());
        out.extend_from_slice(&self.gid.to_be_bytes());
        out.extend_from_slice(&self.mid.to_be_bytes());
        out.extend_from_slice(&self.rand.to_be_bytes());
        out.extend_from_slice(&payload_len.to_be_bytes());
        out.extend_from_slice(&self.payload);
        out.extend_from_slice(&gs_len.to_be_bytes());
        out.extend_from_slice(&self.gs);
        out.push(self.ttl);
        out.extend_from_slice(&self.ts.to_be_bytes());
        Ok(out)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, WireError> {
        let mut r = Reader(bytes);
        let gid = u16::from_be_bytes(r.array()?);
        let mid = u16::from_be_bytes(r.array()?);
        let rand = u128::from_be_bytes(r.array()?);
        let payload_len = u32::from_be_bytes(r.array()?) as usize;
        let payload = r.take(payload_len)?.to_vec();
        let gs_len = u16::from_be_bytes(r.array()?) as usize;
        let gs = r.take(gs_len)?.to_vec();
        let [ttl] = r.array()?;
        let ts = u32::from_be_bytes(r.array()?);
        if !r.0.is_empty() {
            return Err(WireError::TrailingBytes(r.0.len()));
        }
        Ok(WireMessage {
            gid,
            mid,
            rand,
            payload,
            gs,
            ttl,
            ts,
        })
    }
}

struct Reader<'a>(&'a [u8]);

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], WireError> {
        let (head, rest) = self.0.split_at_checked(n).ok_or(WireError::Truncated)?;
        self.0 = rest;
        Ok(head)
    }

    fn array<const N: usize>(&mut self) -> Result<[u8; N], WireError> {
        Ok(self.take(N)?.try_into().expect("length checked"))
    }
}

/// Source of `ts` values, in seconds since the Unix epoch.
pub trait Clock {
    fn now(&mut self) -> u32;
}

/// Wall-clock time, saturating at `u32::MAX`.
#[derive(Debug, Default, Clone, Copy)]
pub struct SystemClock;

impl Clock for SystemClock {
    fn now(&mut self) -> u32 {
        let secs = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        u32::try_from(secs).unwrap_or(u32::MAX)
    }
}

/// Starts at a fixed instant and advances one second per reading.
#[derive(Debug, Clone, Copy)]
pub struct LogicalClock {
    next: u32,
}

impl LogicalClock {
    pub const DEFAULT_EPOCH: u32 = 1_700_000_000;

    pub fn starting_at(epoch: u32) -> Self {
        LogicalClock { next: epoch }
    }
}

impl Default for LogicalClock {
    fn default() -> Self {
        LogicalClock::starting_at(Self::DEFAULT_EPOCH)
    }
}

impl Clock for LogicalClock {
    fn now(&mut self) -> u32 {
        let t = self.next;
        self.next = self.next.wrapping_add(1);
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> WireMessage {
        WireMessage {
            gid: 0x0102,
            mid: 0x0304,
            rand: 0x05060708_090a0b0c_0d0e0f10_11121314,
            payload: vec![0xaa, 0xbb],
            gs: vec![0xcc],
            ttl: 8,
            ts: 0x15161718,
        }
    }

    #[test]
    fn layout_is_big_endian_in_field_order() {
        let bytes = sample().to_bytes().unwrap();
        let expected: Vec<u8> = [
            &[0x01, 0x02, 0x03, 0x04][..],
            &(0x05..=0x14).collect::<Vec<u8>>(),
            &[0, 0, 0, 2, 0xaa, 0xbb],
            &[0, 1, 0xcc],
            &[8, 0x15, 0x16, 0x17, 0x18],
        ]
        .concat();
        assert_eq!(bytes, expected);
        assert_eq!(bytes.len(), sample().encoded_len());
        assert_eq!(WireMessage::from_bytes(&bytes).unwrap(), sample());
    }

    #[test]
    fn empty_fields_round_trip() {
        let m = WireMessage {
            payload: vec![],
            gs: vec![],
            ..sample()
        };
        let bytes = m.to_bytes().unwrap();
        assert_eq!(bytes.len(), FIXED_OVERHEAD);
        assert_eq!(WireMessage::from_bytes(&bytes).unwrap(), m);
    }

    #[test]
    fn rejects_bad_framing() {
        let bytes = sample().to_bytes().unwrap();
        for cut in 0..bytes.len() {
            assert_eq!(
                WireMessage::from_bytes(&bytes[..cut]),
                Err(WireError::Truncated)
            );
        }
        let mut long = bytes.clone();
        long.push(0);
        assert_eq!(
            WireMessage::from_bytes(&long),
            Err(WireError::TrailingBytes(1))
        );
        let big = WireMessage {
            gs: vec![0; 70_000],
            ..sample()
        };
        assert_eq!(big.to_bytes(), Err(WireError::SignatureTooLarge));
    }

    #[test]
    fn logical_clock_ticks() {
        let mut c = LogicalClock::starting_at(10);
        assert_eq!((c.now(), c.now(), c.now()), (10, 11, 12));
        assert!(SystemClock.now() > LogicalClock::DEFAULT_EPOCH);
    }
}
