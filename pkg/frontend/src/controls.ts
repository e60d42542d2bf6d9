import type { ClusteringParams, SpectralParams } from "./types.js";

export class ClusteringControls {
  readonly root: HTMLElement;
  readonly methodSelect: HTMLSelectElement;
  readonly kInput: HTMLInputElement;
  readonly sigmaInput: HTMLInputElement;
  readonly tauInput: HTMLInputElement;
  readonly applyButton: HTMLButtonElement;
  private readonly errorBox: HTMLElement;

  constructor(
    container: HTMLElement,
    private readonly onApply: (params: ClusteringParams) => void,
  ) {
    this.root = document.createElement("div");
    this.root.className = "clustering-controls";

    this.methodSelect = document.createElement("select");
    this.methodSelect.className = "method-select";
    for (const method of ["spectral", "threshold"]) {
      const option = document.createElement("option");
      option.value = method;
      option.textContent = method;
      this.methodSelect.appendChild(option);
    }
    this.root.appendChild(this.methodSelect);

    this.kInput = this.numberField("k", "k");
    this.sigmaInput = this.numberField("sigma", "sigma (optional)");
    this.tauInput = this.numberField("tau", "tau");

    this.applyButton = document.createElement("button");
    this.applyButton.className = "apply-clustering";
    this.applyButton.textContent = "Recluster";
    this.applyButton.addEventListener("click", () => this.submit());
    this.root.appendChild(this.applyButton);

    this.errorBox = document.createElement("div");
    this.errorBox.className = "clustering-error";
    this.errorBox.style.display = "none";
    this.root.appendChild(this.errorBox);

    this.methodSelect.addEventListener("change", () => this.reflectMethod());
    this.reflectMethod();
    container.appendChild(this.root);
  }

  submit(): void {
    const params = this.readParams();
    if (typeof params === "string") {
      this.showError(params);
      return;
    }
    this.clearError();
    this.onApply(params);
  }

  /** Builds the request parameters, or returns a validation message. */
  readParams(): ClusteringParams | string {
    if (this.methodSelect.value === "spectral") {
      const k = Number(this.kInput.value);
      if (this.kInput.value.trim() === "" || !Number.isInteger(k) || k < 1) {
        return "k must be a positive integer";
      }
      const params: SpectralParams = { method: "spectral", k };
      if (this.sigmaInput.value.trim() !== "") {
        const sigma = Number(this.sigmaInput.value);
        if (!Number.isFinite(sigma) || sigma <= 0) return "sigma must be positive";
        params.sigma = sigma;
      }
      return params;
    }
    const tau = Number(this.tauInput.value);
    if (this.tauInput.value.trim() === "" || !Number.isFinite(tau) || tau <= 0) {
      return "tau must be a positive number";
    }
    return { method: "threshold", tau };
  }

  setCurrent(params: ClusteringParams): void {
    this.methodSelect.value = params.method;
    if (params.method === "spectral") {
      this.kInput.value = String(params.k);
      if (params.sigma !== undefined) this.sigmaInput.value = String(params.sigma);
    } else {
      this.tauInput.value = String(params.tau);
    }
    this.reflectMethod();
  }

  showError(message: string): void {
    this.errorBox.textContent = message;
    this.errorBox.style.display = "";
  }

  clearError(): void {
    this.errorBox.textContent = "";
    this.errorBox.style.display = "none";
  }

  private numberField(name: string, placeholder: string): HTMLInputElement {
    const input = document.createElement("input");
    input.type = "text";
    input.className = `param-${name}`;
    input.placeholder = placeholder;
    this.root.appendChild(input);
    return input;
  }

  private reflectMethod(): void {
    const spectral = this.methodSelect.value === "spectral";
    this.kInput.style.display = spectral ? "" : "none";
    this.sigmaInput.style.display = spectral ? "" : "none";
    this.tauInput.style.display = spectral ? "none" : "";
  }
}
