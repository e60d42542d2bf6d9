import { ApiClient, ServiceError } from "./api.js";
import { AnalysisGate, SequentialQueue } from "./flow.js";
import { RepairMap } from "./map.js";
import { QueryConsole } from "./console.js";
import { ClusteringControls } from "./controls.js";
import { ViewState, describeScope } from "./state.js";
import type { ClusteringParams, SemanticsName } from "./types.js";

export class App {
  readonly state: ViewState;
  readonly map: RepairMap;
  readonly console: QueryConsole;
  readonly controls: ClusteringControls;
  private readonly queryQueue = new SequentialQueue();
  private readonly analysisGate = new AnalysisGate();

  constructor(
    container: HTMLElement,
    private readonly api: ApiClient,
    sessionId: string,
  ) {
    this.state = new ViewState(sessionId);

    const mapPane = document.createElement("div");
    mapPane.className = "map-pane";
    const sidePane = document.createElement("div");
    sidePane.className = "side-pane";
    container.appendChild(mapPane);
    container.appendChild(sidePane);

    this.map = new RepairMap(mapPane, {
      onMarkerClick: (label) => {
        this.state.toggleRepair(label);
        this.refreshSelectionVisuals();
      },
      onLegendClick: (blockIndex) => {
        this.state.toggleCluster(blockIndex);
        this.refreshSelectionVisuals();
      },
      onLasso: (labels) => {
        this.state.setManualSelection(labels);
        this.refreshSelectionVisuals();
      },
    });
    this.map.render(null);

    this.controls = new ClusteringControls(sidePane, (params) =>
      this.adjustClustering(params),
    );
    this.console = new QueryConsole(sidePane, (query, semantics) =>
      this.submitQuery(query, semantics),
    );
  }

  /** Creates the app and fetches the session's current analysis. */
  static create(container: HTMLElement, api: ApiClient, sessionId: string): App {
    const app = new App(container, api, sessionId);
    app.fetchAnalysis(undefined, { clearScope: false });
    return app;
  }

  /** Resolves when no analysis or query work is outstanding. */
  async idle(): Promise<void> {
    await this.analysisGate.drain();
    await this.queryQueue.drain();
  }

  adjustClustering(params: ClusteringParams): void {
    this.fetchAnalysis(params, { clearScope: true });
  }

  submitQuery(query: string, semantics: SemanticsName): void {
    const scope = this.state.scopeRequest();
    if (scope === null) {
      this.console.showError("select a cluster or some repairs first");
      return;
    }
    const queriedLabels = this.state.scopeLabels();
    void this.queryQueue.enqueue(async () => {
      try {
        const { document: doc, raw } = await this.api.query(this.state.sessionId, {
          query,
          semantics,
          scope,
        });
        this.state.appendHistory({
          query,
          semantics,
          scope,
          answer: doc.answer,
          raw,
        });
        this.console.clearError();
        this.console.renderHistory(this.state.history);
        this.map.setAnswerHighlight(queriedLabels, doc.answer);
      } catch (err) {
        this.console.showError(err instanceof ServiceError ? err.detail : String(err));
      }
    });
  }

  private fetchAnalysis(
    params: ClusteringParams | undefined,
    opts: { clearScope: boolean },
  ): void {
    this.analysisGate.request(async () => {
      try {
        const { document: doc } = await this.api.analysis(this.state.sessionId, params);
        this.state.setAnalysis(doc, opts);
        this.map.render(doc);
        this.controls.setCurrent(doc.clustering);
        this.controls.clearError();
        this.refreshSelectionVisuals();
      } catch (err) {
        this.controls.showError(err instanceof ServiceError ? err.detail : String(err));
      }
    });
  }

  private refreshSelectionVisuals(): void {
    const labels = this.state.scopeLabels();
    this.map.setSelection(new Set(labels));
    const scope = this.state.scope;
    this.map.setLegendSelection(scope && scope.kind === "cluster" ? scope.index : null);
    const request = this.state.scopeRequest();
    this.console.setScopeDescription(
      request === null ? "no scope selected" : `scope: ${describeScope(request)}`,
    );
  }
}

/** Entry point for the static page: connects from URL parameters or a form. */
export function main(root: HTMLElement): void {
  const params = new URLSearchParams(window.location.search);
  const apiBase = params.get("api") ?? "http://localhost:8000";
  const sessionId = params.get("session");
  if (sessionId) {
    App.create(root, new ApiClient(apiBase), sessionId);
    return;
  }
  renderConnectForm(root, apiBase);
}

function renderConnectForm(root: HTMLElement, apiBase: string): void {
  const form = document.createElement("div");
  form.className = "connect-form";

  const apiInput = document.createElement("input");
  apiInput.className = "connect-api";
  apiInput.value = apiBase;
  form.appendChild(apiInput);

  const pathInput = document.createElement("input");
  pathInput.className = "connect-path";
  pathInput.placeholder = "server path of a saved session";
  form.appendChild(pathInput);

  const idInput = document.createElement("input");
  idInput.className = "connect-id";
  idInput.placeholder = "or an existing session id";
  form.appendChild(idInput);

  const button = document.createElement("button");
  button.textContent = "Connect";
  form.appendChild(button);

  const error = document.createElement("div");
  error.className = "connect-error";
  form.appendChild(error);

  button.addEventListener("click", async () => {
    const api = new ApiClient(apiInput.value.trim());
    try {
      let id = idInput.value.trim();
      if (id === "") {
        const loaded = await api.loadSession(pathInput.value.trim());
        id = loaded.document.id;
      }
      root.removeChild(form);
      App.create(root, api, id);
    } catch (err) {
      error.textContent = err instanceof ServiceError ? err.detail : String(err);
    }
  });

  root.appendChild(form);
}
