//! Encode a signed client message, decode it, and show the field sizes.

use gsfl::costmodel::message_size_table;
use gsfl::protocol::{WireMessage, DEFAULT_TTL};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let msg = WireMessage {
        gid: 1,
        mid: 42,
        rand: 0x0123_4567_89ab_cdef_0011_2233_4455_6677,
        payload: vec![0xaa; 128],
        gs: vec![0x55; 240],
        ttl: DEFAULT_TTL,
        ts: 1_700_000_000,
    };
    let bytes = msg.to_bytes()?;
    println!("encoded: {} bytes", bytes.len());
    println!("header:  {:02x?}", &bytes[..24]);
    println!(
        "round trip exact: {}",
        WireMessage::from_bytes(&bytes)? == msg
    );
    println!(
        "truncated: {:?}",
        WireMessage::from_bytes(&bytes[..bytes.len() - 1])
    );

    let table = message_size_table();
    println!("analytic field sizes (bits):");
    for (name, bits) in table.fields {
        println!("  {name:<8}{bits:>6}");
    }
    println!(
        "  total   {:>6} bits = {} bytes",
        table.total_bits, table.whole_bytes
    );
    Ok(())
}
