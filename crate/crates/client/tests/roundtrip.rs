use haulplan_client::{Client, ClientError};
use haulplan_core::scenario::{demo_scenario, solve_scenario, DEMO_SCENARIO_JSON};

async fn client() -> Client {
    let addr = haulplan_server::spawn("127.0.0.1:0".parse().unwrap()).await.unwrap();
    Client::new(format!("http://{addr}/"))
}

#[tokio::test]
async fn full_session() {
    let c = client().await;
    let record = c.create(&demo_scenario()).await.unwrap();
    assert_eq!(c.get(&record.id).await.unwrap(), demo_scenario());

    let remote = c.solve(&record.id, None).await.unwrap();
    let local = solve_scenario(&demo_scenario(), 2.0).unwrap();
    assert_eq!(remote, local);
    assert_eq!(remote.to_json(), local.to_json());

    let svg = c.svg(&record.id, Some(5.0)).await.unwrap();
    assert_eq!(svg.matches("<polyline").count(), 8);

    let mut edited = demo_scenario();
    edited.name = "edited".into();
    let updated = c.put(&record.id, &edited).await.unwrap();
    assert_eq!(updated.scenario.name, "edited");
    assert_eq!(c.get(&record.id).await.unwrap().name, "edited");
}

#[tokio::test]
async fn raw_upload_and_errors() {
    let c = client().await;
    let record = c.create_raw(DEMO_SCENARIO_JSON.to_string()).await.unwrap();
    assert_eq!(record.scenario, demo_scenario());

    let err = c.create_raw("[]".into()).await.unwrap_err();
    assert!(err.is_scenario_error());
    assert!(matches!(&err, ClientError::Api { status: 400, error } if error.code == "parse_error"));

    let err = c.get("missing").await.unwrap_err();
    assert!(matches!(&err, ClientError::Api { status: 404, .. }));
    assert!(!err.is_scenario_error());
}

#[tokio::test]
async fn unreachable_server_is_a_transport_error() {
    let listener = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    drop(listener);
    let err = Client::new(format!("http://{addr}")).get("x").await.unwrap_err();
    assert!(matches!(err, ClientError::Transport(_)));
}
