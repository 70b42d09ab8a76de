//! Length-prefixed frames: `length: u32 BE` (payload length + 1),
//! `msg_type: u8`, then the payload.

use std::io::{self, Read, Write};

use thiserror::Error;

/// Largest accepted value of the length field.
pub const MAX_FRAME_LEN: u32 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MessageType {
    Hello = 0x01,
    Challenge = 0x02,
    Response = 0x03,
    Verdict = 0x04,
    Error = 0x05,
}

impl MessageType {
    pub fn from_byte(b: u8) -> Option<MessageType> {
        Some(match b {
            0x01 => MessageType::Hello,
            0x02 => MessageType::Challenge,
            0x03 => MessageType::Response,
            0x04 => MessageType::Verdict,
            0x05 => MessageType::Error,
            _ => return None,
        })
    }
}

/// One-byte codes carried by ERROR frames.
pub mod error_code {
    pub const UNKNOWN_TYPE: u8 = 0x01;
    pub const BAD_LENGTH: u8 = 0x02;
    pub const MALFORMED: u8 = 0x03;
    pub const SCHEME_MISMATCH: u8 = 0x04;
    pub const UNEXPECTED: u8 = 0x05;
    pub const KEY_MISMATCH: u8 = 0x06;
}

/// A frame whose type byte has not been interpreted yet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub msg_type: u8,
    pub payload: Vec<u8>,
}

impl Frame {
    pub fn new(msg_type: MessageType, payload: Vec<u8>) -> Self {
        Self { msg_type: msg_type as u8, payload }
    }

    pub fn kind(&self) -> Option<MessageType> {
        MessageType::from_byte(self.msg_type)
    }

    pub fn encode(&self) -> Vec<u8> {
        encode_raw(self.msg_type, &self.payload)
    }
}

#[derive(Debug, Error)]
pub enum FrameError {
    /// The peer closed the connection on a frame boundary.
    #[error("connection closed")]
    Closed,
    #[error("connection closed mid-frame")]
    Truncated,
    #[error("frame length {0} out of range")]
    BadLength(u32),
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn encode_raw(msg_type: u8, payload: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(5 + payload.len());
    out.extend_from_slice(&(payload.len() as u32 + 1).to_be_bytes());
    out.push(msg_type);
    out.extend_from_slice(payload);
    out
}

pub fn write_frame<W: Write + ?Sized>(w: &mut W, msg_type: MessageType, payload: &[u8]) -> io::Result<()> {
    w.write_all(&encode_raw(msg_type as u8, payload))?;
    w.flush()
}

fn read_full<R: Read + ?Sized>(r: &mut R, buf: &mut [u8]) -> Result<usize, io::Error> {
    let mut filled = 0;
    while filled < buf.len() {
        match r.read(&mut buf[filled..]) {
            Ok(0) => break,
            Ok(k) => filled += k,
            Err(e) if e.kind() == io::ErrorKind::Interrupted => {}
            Err(e) => return Err(e),
        }
    }
    Ok(filled)
}

/// Reads one frame. The length field is checked against
/// `1..=MAX_FRAME_LEN` before any payload is read.
pub fn read_frame<R: Read + ?Sized>(r: &mut R) -> Result<Frame, FrameError> {
    let mut header = [0u8; 4];
    match read_full(r, &mut header)? {
        0 => return Err(FrameError::Closed),
        4 => {}
        _ => return Err(FrameError::Truncated),
    }
    let len = u32::from_be_bytes(header);
    if len == 0 || len > MAX_FRAME_LEN {
        return Err(FrameError::BadLength(len));
    }
    let mut body = vec![0u8; len as usize];
    if read_full(r, &mut body)? != body.len() {
        return Err(FrameError::Truncated);
    }
    let msg_type = body[0];
    body.remove(0);
    Ok(Frame { msg_type, payload: body })
}
