//! Framed TCP transport so prover and verifier can run as separate
//! processes.
//!
//! Every message is a [`Frame`]. A session is:
//!
//! ```text
//! client                       server
//! HELLO(public key)      →
//!                        ←     CHALLENGE(Y)           ┐
//! RESPONSE(Z, 32 bytes)  →                            │ × rounds
//!                        ←     VERDICT(accept, round) ┘
//!                              close
//! ```
//!
//! Malformed input is answered with an ERROR frame carrying a one-byte
//! code (see [`error_code`]) and the connection is closed.

mod client;
mod frame;
mod message;
mod server;

pub use client::{prove, prove_tcp, ClientError, ProveOutcome};
pub use frame::{error_code, read_frame, write_frame, Frame, FrameError, MessageType, MAX_FRAME_LEN};
pub use message::{
    decode_hello, decode_verdict, encode_hello, encode_verdict, HelloError, MAX_HELLO_EXPONENT, MAX_HELLO_INF,
    MAX_HELLO_STRANDS,
};
pub use server::{serve_connection, serve_forever, serve_tcp_connection, ServeError, ServerConfig, IO_TIMEOUT};

/// Runs the server over a fixed input and returns everything it wrote,
/// split into frames. Used by tests and the fuzz harness.
pub fn replay_against_server(input: &[u8], cfg: &ServerConfig) -> (Result<crate::protocol::Transcript, ServeError>, Vec<Frame>) {
    let mut reader = input;
    let mut out = Vec::new();
    let result = serve_connection(&mut reader, &mut out, cfg, 0);
    let mut frames = Vec::new();
    let mut rest = out.as_slice();
    while let Ok(f) = read_frame(&mut rest) {
        frames.push(f);
    }
    (result, frames)
}

/// One malformed or adversarial server input: random bytes, a truncated
/// or bit-flipped valid exchange, bad lengths, unknown types, or a valid
/// HELLO followed by junk.
pub fn fuzz_case<R: rand::Rng + ?Sized>(rng: &mut R, hello: &[u8]) -> Vec<u8> {
    let valid_hello = Frame { msg_type: MessageType::Hello as u8, payload: hello.to_vec() }.encode();
    let random_bytes = |rng: &mut R, max: usize| -> Vec<u8> {
        let len = rng.random_range(0..=max);
        (0..len).map(|_| rng.random()).collect()
    };
    match rng.random_range(0..7) {
        0 => random_bytes(rng, 64),
        1 => {
            let cut = rng.random_range(0..valid_hello.len());
            valid_hello[..cut].to_vec()
        }
        2 => {
            let mut v = valid_hello.clone();
            let k = rng.random_range(0..v.len());
            v[k] ^= 1 << rng.random_range(0..8);
            v
        }
        3 => {
            let mut v = valid_hello.clone();
            v.extend(random_bytes(rng, 48));
            v
        }
        4 => {
            let payload = random_bytes(rng, 40);
            let t = rng.random_range(0..=255u8);
            Frame { msg_type: t, payload }.encode()
        }
        5 => {
            let mut v = rng.random_range(0..=u32::MAX).to_be_bytes().to_vec();
            v.extend(random_bytes(rng, 16));
            v
        }
        _ => {
            let mut v = valid_hello.clone();
            let len = rng.random_range(0..=64usize);
            let t = [0x01, 0x02, 0x03, 0x04, 0x05, 0x07][rng.random_range(0..6)];
            v.extend(Frame { msg_type: t, payload: vec![0xAB; len] }.encode());
            v
        }
    }
}

/// Feeds `input` to a server session and checks the outcome: no panic, and
/// the session ends either with an ERROR frame or because the input ran
/// out. A session that completes normally on fuzzed input is also fine as
/// long as it did not accept.
pub fn check_server_survives(input: &[u8], cfg: &ServerConfig) -> Result<(), String> {
    let outcome = std::panic::catch_unwind(|| replay_against_server(input, cfg));
    let (result, frames) = outcome.map_err(|_| format!("server panicked on {}", hex::encode(input)))?;
    match result {
        Err(ServeError::Rejected { code, .. }) => match frames.last() {
            Some(f) if f.kind() == Some(MessageType::Error) && f.payload == [code] => Ok(()),
            _ => Err(format!("rejected without an ERROR frame on {}", hex::encode(input))),
        },
        Err(ServeError::Frame(_)) | Err(ServeError::Io(_)) => Ok(()),
        Ok(t) if !t.accepted() => Ok(()),
        Ok(_) => Err(format!("fuzzed input was accepted: {}", hex::encode(input))),
    }
}
