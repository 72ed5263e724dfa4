use std::io::{Read, Write};
use std::sync::Arc;

use kidgym_play::{serve_on, PlayService};

fn http(port: u16, request: String) -> String {
    let mut s = std::net::TcpStream::connect(("127.0.0.1", port)).unwrap();
    s.write_all(request.as_bytes()).unwrap();
    let mut out = String::new();
    s.read_to_string(&mut out).unwrap();
    out
}

#[tokio::test(flavor = "multi_thread")]
async fn serves_over_tcp() {
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let port = listener.local_addr().unwrap().port();
    let (stop, stopped) = tokio::sync::oneshot::channel::<()>();
    let server = tokio::spawn(serve_on(listener, Arc::new(PlayService::in_memory(1)), async {
        let _ = stopped.await;
    }));
    let reply = tokio::task::spawn_blocking(move || {
        let body = r#"{"participant":"t","kind":"PL","level":1,"seed":4}"#;
        http(
            port,
            format!(
                "POST /sessions HTTP/1.1\r\nHost: x\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
                body.len()
            ),
        )
    })
    .await
    .unwrap();
    assert!(reply.starts_with("HTTP/1.1 201"), "{reply}");
    assert!(reply.contains("\"goal\""));
    stop.send(()).unwrap();
    server.await.unwrap().unwrap();
}
