//! Ordered log of every message put on the simulated network.

use std::io::Write;

use serde::Serialize;

use super::messages::{Envelope, MessageKind, Party};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TranscriptEntry {
    pub step: u64,
    pub sender: Party,
    pub receiver: Party,
    pub kind: MessageKind,
    pub byte_size: u64,
    pub session_id: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Transcript {
    entries: Vec<TranscriptEntry>,
}

impl Transcript {
    pub fn record(&mut self, env: &Envelope) {
        self.entries.push(TranscriptEntry {
            step: self.entries.len() as u64,
            sender: env.sender,
            receiver: env.receiver,
            kind: env.event.kind(),
            byte_size: env.event.byte_size() as u64,
            session_id: env.session_id,
        });
    }

    pub fn entries(&self) -> &[TranscriptEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn count(&self, kind: MessageKind) -> usize {
        self.entries.iter().filter(|e| e.kind == kind).count()
    }

    /// Messages with a client (or the client broadcast) at either end.
    /// Admin-server traffic is infrastructure and not counted.
    pub fn signaling_count(&self) -> u64 {
        self.entries
            .iter()
            .filter(|e| e.sender.is_client_side() || e.receiver.is_client_side())
            .count() as u64
    }

    /// Client-sent bytes, excluding join traffic with the admin.
    pub fn client_upload_bytes(&self) -> u64 {
        self.entries
            .iter()
            .filter(|e| matches!(e.sender, Party::Client(_)) && e.receiver == Party::Server)
            .map(|e| e.byte_size)
            .sum()
    }

    pub fn write_jsonl<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for e in &self.entries {
            serde_json::to_writer(&mut out, e)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn to_jsonl(&self) -> String {
        let mut buf = Vec::new();
        self.write_jsonl(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("serde_json emits UTF-8")
    }
}
