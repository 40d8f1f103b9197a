use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use http_body_util::BodyExt;
use icefold::server::{router, AppState};
use serde_json::{json, Value};
use tower::ServiceExt;

const A3: &str = include_str!("../../../fixtures/a3.iq");

async fn call(app: &axum::Router, method: Method, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body.map_or_else(Body::empty, |b| Body::from(b.to_string())))
        .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, serde_json::from_slice(&bytes).unwrap_or(Value::Null))
}

async fn session(app: &axum::Router) -> (String, Value) {
    let (status, v) = call(app, Method::POST, "/api/sessions", Some(json!({ "file": A3 }))).await;
    assert_eq!(status, StatusCode::CREATED);
    (v["id"].as_str().unwrap().to_string(), v["state"].clone())
}

#[tokio::test]
async fn mutate_and_undo_round_trip() {
    let app = router(AppState::default());
    let (id, initial) = session(&app).await;
    let base = format!("/api/sessions/{id}");
    let (s, after) = call(
        &app,
        Method::POST,
        &format!("{base}/mutate"),
        Some(json!({ "orbit": 1 })),
    )
    .await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(after["state"]["history"], json!([{ "orbit": 1 }]));
    assert_eq!(after["state"]["commutes"], json!(true));
    let (_, vars) = call(&app, Method::GET, &format!("{base}/variables"), None).await;
    assert!(vars["variables"]["folded"]
        .as_array()
        .unwrap()
        .contains(&json!("x1^-1*x2 + x1^-1*x4")));
    let (s, undone) = call(&app, Method::POST, &format!("{base}/undo"), None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(undone["state"], initial);
    let (_, got) = call(&app, Method::GET, &base, None).await;
    assert_eq!(got["state"], initial);
}

#[tokio::test]
async fn fold_reports_the_folded_matrix() {
    let app = router(AppState::default());
    let (id, _) = session(&app).await;
    let (s, v) = call(&app, Method::GET, &format!("/api/sessions/{id}/fold"), None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(
        v["folded"]["matrix"]["entries"],
        json!([[0, 2], [-1, 0], [1, 0], [0, 1]])
    );
    assert_eq!(v["column_symmetrizer"], json!([2, 1]));
    assert_eq!(v["state"]["commutes"], json!(true));
    assert!(v["state"]["unfolded"]["matrix"].is_object() && v["state"]["folded"]["cluster"].is_object());
}

#[tokio::test]
async fn errors_map_to_status_codes() {
    let app = router(AppState::default());
    let (s, v) = call(&app, Method::GET, "/api/sessions/nope", None).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
    assert_eq!(v["error"], "UnknownSession");

    let (id, _) = session(&app).await;
    let uri = format!("/api/sessions/{id}/mutate");
    let (s, v) = call(&app, Method::POST, &uri, Some(json!({ "orbit": 4 }))).await;
    assert_eq!(s, StatusCode::CONFLICT);
    assert_eq!(v["error"], "FrozenOrbit");
    assert_eq!(v["witness"], json!({ "orbit": 4 }));

    let (s, _) = call(&app, Method::POST, &uri, Some(json!({ "orbit": 1, "vertex": 2 }))).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    let (s, _) = call(&app, Method::POST, &uri, Some(json!({ "turn": 1 }))).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    let (s, v) = call(
        &app,
        Method::POST,
        "/api/sessions",
        Some(json!({ "file": "QUIVER x\nARROWS\na: 1 -> 2\n" })),
    )
    .await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert!(v["message"].is_string());
}
